#include "thfield/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "json.hpp"
#include "thfield/version.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian float64; big-endian hosts need byte swaps");

namespace thfield::io {

using nlohmann::json;

std::string sidecar_path(const std::string& bin_path) {
    const auto dot = bin_path.find_last_of('.');
    const auto slash = bin_path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return bin_path + ".json";
    return bin_path.substr(0, dot) + ".json";
}

namespace {

void write_raw(const std::string& path, const std::vector<double>& values) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("short write: " + path);
}

json grid_json(const Grid2D& g) {
    return json{{"x0", g.x0}, {"y0", g.y0}, {"dx", g.dx},
                {"dy", g.dy}, {"nx", g.nx}, {"ny", g.ny}};
}

Grid2D grid_from_json(const json& j) {
    Grid2D g;
    g.x0 = j.at("x0");
    g.y0 = j.at("y0");
    g.dx = j.at("dx");
    g.dy = j.at("dy");
    g.nx = j.at("nx");
    g.ny = j.at("ny");
    g.validate();
    return g;
}

json format_json() {
    return json{{"type", "float64"}, {"order", "row-major"}, {"endianness", "little"}};
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
}

}  // namespace

void write_sample_path(const std::string& bin_path, const SamplePath& path,
                       const std::string& command_line) {
    write_raw(bin_path, path.values);
    json j{
        {"tool", "thfield"},
        {"version", kVersion},
        {"command", command_line},
        {"method", to_string(path.method)},
        {"params",
         {{"k", path.params.k},
          {"H", {path.params.H1, path.params.H2}},
          {"lambda", {path.params.lambda1, path.params.lambda2}}}},
        {"grid", grid_json(path.anchors)},
        {"format", format_json()},
    };
    write_text(sidecar_path(bin_path), j.dump(2) + "\n");
}

void write_field(const std::string& bin_path, const Field2D& f, const std::string& meta_json,
                 const std::string& command_line) {
    write_raw(bin_path, f.values);
    json j{
        {"tool", "thfield"},
        {"version", kVersion},
        {"command", command_line},
        {"grid", grid_json(f.grid)},
        {"format", format_json()},
    };
    if (!meta_json.empty()) j["meta"] = json::parse(meta_json);
    write_text(sidecar_path(bin_path), j.dump(2) + "\n");
}

LoadedField read_field(const std::string& bin_path) {
    std::ifstream js(sidecar_path(bin_path));
    if (!js) throw std::runtime_error("missing sidecar: " + sidecar_path(bin_path));
    json j = json::parse(js);
    LoadedField out;
    out.field.grid = grid_from_json(j.at("grid"));
    out.sidecar_json = j.dump();
    out.field.values.resize(out.field.grid.size());
    std::ifstream is(bin_path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + bin_path);
    is.read(reinterpret_cast<char*>(out.field.values.data()),
            static_cast<std::streamsize>(out.field.values.size() * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != out.field.values.size() * sizeof(double))
        throw std::runtime_error("short read (grid/file mismatch): " + bin_path);
    return out;
}

void write_csv(const std::string& path, const SamplePath& sp) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os.precision(15);
    os << "t,s,z\n";
    for (int i = 0; i < sp.anchors.nx; ++i)
        for (int j = 0; j < sp.anchors.ny; ++j)
            os << sp.anchors.node_x(i) << ',' << sp.anchors.node_y(j) << ',' << sp.at(i, j)
               << '\n';
}

void write_pgm(const std::string& path, const Grid2D& grid, const std::vector<double>& values) {
    double lo = values.empty() ? 0.0 : values[0], hi = lo;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = (hi > lo) ? hi - lo : 1.0;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "P5\n" << grid.nx << ' ' << grid.ny << "\n255\n";
    // rows top-to-bottom = s decreasing
    for (int j = grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double v = values[grid.index(i, j)];
            const int b = static_cast<int>(std::lround(255.0 * (v - lo) / span));
            os.put(static_cast<char>(std::clamp(b, 0, 255)));
        }
    }
}

}
