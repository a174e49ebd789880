#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "thfield/io.hpp"
#include "thfield/simulate.hpp"

using namespace thfield;

TEST_SUITE("io") {

TEST_CASE("sidecar path derivation") {
    CHECK(io::sidecar_path("z.bin") == "z.json");
    CHECK(io::sidecar_path("/tmp/a/z.bin") == "/tmp/a/z.json");
    CHECK(io::sidecar_path("noext") == "noext.json");
    CHECK(io::sidecar_path("/tmp/v1.2/out") == "/tmp/v1.2/out.json");
}

TEST_CASE("field round trip is bit exact") {
    const Grid2D g{-1.0, 0.5, 0.25, 0.125, 7, 9};
    Field2D f(g);
    for (std::size_t i = 0; i < f.values.size(); ++i)
        f.values[i] = std::sin(0.1 * i) * 1e-3 + i;
    const std::string path = "io_roundtrip_test.bin";
    io::write_field(path, f, R"({"note":"test"})", "unit-test");
    const io::LoadedField back = io::read_field(path);
    CHECK(back.field.grid.same_layout(g));
    CHECK(back.field.values == f.values);
    CHECK(back.sidecar_json.find("unit-test") != std::string::npos);
    std::remove(path.c_str());
    std::remove(io::sidecar_path(path).c_str());
}

TEST_CASE("sample path files carry full provenance") {
    const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
    const Grid2D anchors{0.5, 0.5, 0.5, 0.5, 2, 2};
    const SamplePath sp = sample_order1_cholesky(p, anchors, {42, 0});
    const std::string path = "io_path_test.bin";
    io::write_sample_path(path, sp, "thfield simulate --seed 42");
    std::ifstream js(io::sidecar_path(path));
    const auto j = nlohmann::json::parse(js);
    CHECK(j["tool"] == "thfield");
    CHECK(j["method"] == "cholesky");
    CHECK(j["params"]["k"] == 1);
    CHECK(j["grid"]["nx"] == 2);
    CHECK(j["format"]["endianness"] == "little");
    CHECK(j["command"] == "thfield simulate --seed 42");
    const io::LoadedField back = io::read_field(path);
    CHECK(back.field.values == sp.values);
    std::remove(path.c_str());
    std::remove(io::sidecar_path(path).c_str());
}

TEST_CASE("csv and pgm outputs") {
    const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
    const Grid2D anchors{0.5, 0.5, 0.5, 0.5, 2, 2};
    const SamplePath sp = sample_order1_cholesky(p, anchors, {42, 0});
    io::write_csv("io_test.csv", sp);
    {
        std::ifstream is("io_test.csv");
        std::string header;
        std::getline(is, header);
        CHECK(header == "t,s,z");
        int rows = 0;
        std::string line;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == 4);
    }
    io::write_pgm("io_test.pgm", sp.anchors, sp.values);
    {
        std::ifstream is("io_test.pgm", std::ios::binary);
        std::string magic;
        is >> magic;
        CHECK(magic == "P5");
        int w, h, maxv;
        is >> w >> h >> maxv;
        CHECK(w == 2);
        CHECK(h == 2);
        CHECK(maxv == 255);
    }
    std::remove("io_test.csv");
    std::remove("io_test.pgm");
}

TEST_CASE("reading without a sidecar fails cleanly") {
    CHECK_THROWS(io::read_field("definitely_missing_file.bin"));
}

}  // TEST_SUITE
