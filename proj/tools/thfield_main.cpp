#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "thfield/covariance.hpp"
#include "thfield/harness.hpp"
#include "thfield/io.hpp"
#include "thfield/simulate.hpp"
#include "thfield/tfcalc.hpp"
#include "thfield/version.hpp"

namespace {

using namespace thfield;

// exit codes: 0 ok, 1 check failure, 2 usage, 3 runtime failure
constexpr int kOk = 0, kCheckFail = 1, kUsage = 2, kRuntime = 3;

std::pair<double, double> parse_pair(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError(std::string(what) + ": expected two comma-separated values");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

std::pair<int, int> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos)
        throw CLI::ValidationError("--grid: expected NxM");
    return {std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))};
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string quote_command(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) {
        if (i) os << ' ';
        os << argv[i];
    }
    return os.str();
}

int default_threads() {
    if (const char* env = std::getenv("THFIELD_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 2;
}

struct SimulateOpts {
    int k = 1;
    std::string hurst = "0.7,0.7";
    std::string lambda = "1,1";
    std::string grid = "32x32";
    std::string tmax = "2,2";
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string method = "cholesky";
    std::string output;
    int spectral_modes = 512;
    bool csv = false;
    bool pgm = false;
};

int run_simulate(const SimulateOpts& o, const std::string& command) {
    const auto [h1, h2] = parse_pair(o.hurst, "--h");
    const auto [l1, l2] = parse_pair(o.lambda, "--lambda");
    const auto [nx, ny] = parse_grid(o.grid);
    const auto [t1, t2] = parse_pair(o.tmax, "--tmax");
    FieldParams params{o.k, h1, h2, l1, l2};
    params.validate();
    if (nx < 1 || ny < 1 || !(t1 > 0) || !(t2 > 0))
        throw CLI::ValidationError("--grid and --tmax must be positive");

    // anchors at (i+1) tmax/n per axis, strictly positive
    const Grid2D anchors{t1 / nx, t2 / ny, t1 / nx, t2 / ny, nx, ny};
    const SeedSpec seed{o.seed, o.stream};
    const SampleMethod method = sample_method_from_string(o.method);

    SamplePath path;
    switch (method) {
        case SampleMethod::cholesky:
            path = sample_order1_cholesky(params, anchors, seed);
            break;
        case SampleMethod::spectral: {
            const Grid2D fg = suggest_freq_grid(params, o.spectral_modes);
            path = sample_order1_spectral(params, anchors, fg, seed);
            break;
        }
        case SampleMethod::moving_average: {
            const Grid2D ng = suggest_noise_grid(params, anchors);
            path = sample_orderk_moving_average(params, anchors, ng, seed);
            break;
        }
        case SampleMethod::semimartingale: {
            const Grid2D ng = suggest_noise_grid(params, anchors);
            path = sample_semimartingale(params, anchors, ng, seed);
            break;
        }
    }
    io::write_sample_path(o.output, path, command);
    if (o.csv) io::write_csv(o.output + ".csv", path);
    if (o.pgm) io::write_pgm(o.output + ".pgm", path.anchors, path.values);
    std::printf("wrote %s (+ sidecar %s)\n", o.output.c_str(),
                io::sidecar_path(o.output).c_str());
    return kOk;
}

struct CovarianceOpts {
    int k = 1;
    std::string hurst = "0.7,0.7";
    std::string lambda = "1,1";
    std::string ts = "0.5,1,1.5,2";
    std::string ss = "0.5,1,1.5,2";
    std::string output;
};

int run_covariance(const CovarianceOpts& o, const std::string& command) {
    const auto [h1, h2] = parse_pair(o.hurst, "--h");
    const auto [l1, l2] = parse_pair(o.lambda, "--lambda");
    FieldParams params{o.k, h1, h2, l1, l2};
    params.validate();
    const std::vector<double> ts = parse_list(o.ts);
    const std::vector<double> ss = parse_list(o.ss);

    std::vector<std::pair<double, double>> anchors;
    for (double t : ts)
        for (double s : ss) anchors.emplace_back(t, s);
    const Eigen::MatrixXd m = covariance_matrix(params, anchors);

    std::ofstream os(o.output);
    if (!os) throw std::runtime_error("cannot open for writing: " + o.output);
    os.precision(15);
    os << "t,s,u,v,cov\n";
    for (std::size_t i = 0; i < anchors.size(); ++i)
        for (std::size_t j = 0; j < anchors.size(); ++j)
            os << anchors[i].first << ',' << anchors[i].second << ',' << anchors[j].first << ','
               << anchors[j].second << ',' << m(i, j) << '\n';

    nlohmann::json meta{{"tool", "thfield"},
                        {"version", kVersion},
                        {"command", command},
                        {"params",
                         {{"k", params.k},
                          {"H", {params.H1, params.H2}},
                          {"lambda", {params.lambda1, params.lambda2}}}},
                        {"anchors_t", ts},
                        {"anchors_s", ss}};
    std::ofstream js(io::sidecar_path(o.output));
    js << meta.dump(2) << '\n';
    std::printf("wrote %s\n", o.output.c_str());
    return kOk;
}

struct OperatorOpts {
    std::string input;
    std::string op = "integral";
    std::string side = "plus";
    std::string route = "fourier";
    std::string alpha = "0.5,0.5";
    std::string lambda = "1,1";
    std::string output;
};

int run_operator(const OperatorOpts& o, const std::string& command) {
    const auto [a1, a2] = parse_pair(o.alpha, "--alpha");
    const auto [l1, l2] = parse_pair(o.lambda, "--lambda");
    const FracOrder order{a1, a2, l1, l2};
    order.validate();
    const Side side = (o.side == "plus") ? Side::plus
                      : (o.side == "minus")
                          ? Side::minus
                          : throw CLI::ValidationError("--side must be plus or minus");

    const io::LoadedField in = io::read_field(o.input);
    Field2D out;
    if (o.op == "integral") {
        out = (o.route == "time") ? frac_integral(order, side, in.field)
                                  : frac_integral_fourier(order, side, in.field);
    } else if (o.op == "derivative") {
        out = (o.route == "time") ? frac_derivative_pointwise(order, side, in.field)
                                  : frac_derivative_fourier(order, side, in.field);
    } else {
        throw CLI::ValidationError("--op must be integral or derivative");
    }
    nlohmann::json meta{{"operator", o.op},
                        {"side", o.side},
                        {"route", o.route},
                        {"alpha", {a1, a2}},
                        {"lambda", {l1, l2}},
                        {"input", o.input}};
    io::write_field(o.output, out, meta.dump(), command);
    std::printf("wrote %s\n", o.output.c_str());
    return kOk;
}

struct VerifyOpts {
    std::string suite = "all";
    std::string json_path;
    std::string text_path;
    bool quick = false;
    int threads = default_threads();
};

int run_verify(const VerifyOpts& o) {
    std::vector<CheckResult> results;
    const bool all = o.suite == "all";
    if (all || o.suite == "fractional") {
        FractionalCalcConfig cfg;
        cfg.threads = o.threads;
        if (o.quick) {
            cfg.alphas = {0.5};
            cfg.lambdas = {1.0};
        }
        auto r = run_fractional_calculus_suite(cfg);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (all || o.suite == "fieldlaw") {
        FieldLawConfig cfg;
        cfg.threads = o.threads;
        if (o.quick) {
            cfg.hursts = {0.75};
            cfg.lambdas = {1.0};
            cfg.run_mc = false;
        }
        auto r = run_field_law_suite(cfg);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (all || o.suite == "wiener") {
        WienerConfig cfg;
        cfg.threads = o.threads;
        if (o.quick) {
            cfg.run_mc = false;
            cfg.smooth_test_functions = 4;
        }
        auto r = run_wiener_suite(cfg);
        results.insert(results.end(), r.begin(), r.end());
    }
    if (results.empty()) throw CLI::ValidationError("--suite must be all, fractional, fieldlaw or wiener");

    const std::string text = report_to_text(results);
    std::fputs(text.c_str(), stdout);
    if (!o.json_path.empty()) {
        std::ofstream js(o.json_path);
        js << report_to_json(results);
    }
    if (!o.text_path.empty()) {
        std::ofstream ts(o.text_path);
        ts << text;
    }
    return all_passed(results) ? kOk : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thfield: two-parameter tempered Hermite field toolkit"};
    app.set_help_flag("--help", "print help");  // frees --h for the Hurst pair
    app.set_version_flag("--version", thfield::kVersion);
    app.require_subcommand(1);

    SimulateOpts so;
    auto* sim = app.add_subcommand("simulate", "sample the field on an anchor lattice");
    sim->set_help_flag("--help", "print help");
    sim->add_option("--k", so.k, "Hermite order");
    sim->add_option("--h", so.hurst, "Hurst pair H1,H2");
    sim->add_option("--lambda", so.lambda, "tempering pair l1,l2");
    sim->add_option("--grid", so.grid, "anchor counts NxM");
    sim->add_option("--tmax", so.tmax, "anchor extent T1,T2");
    sim->add_option("--seed", so.seed, "RNG seed");
    sim->add_option("--stream", so.stream, "RNG substream");
    sim->add_option("--method", so.method, "cholesky|spectral|moving_average|semimartingale");
    sim->add_option("--modes", so.spectral_modes, "spectral modes per axis");
    sim->add_option("-o,--output", so.output, "output .bin path")->required();
    sim->add_flag("--csv", so.csv, "also write CSV");
    sim->add_flag("--pgm", so.pgm, "also write a PGM heatmap");

    CovarianceOpts co;
    auto* cov = app.add_subcommand("covariance", "tabulate the closed-form covariance");
    cov->set_help_flag("--help", "print help");
    cov->add_option("--k", co.k, "Hermite order");
    cov->add_option("--h", co.hurst, "Hurst pair H1,H2");
    cov->add_option("--lambda", co.lambda, "tempering pair l1,l2");
    cov->add_option("--t", co.ts, "comma list of t anchors");
    cov->add_option("--s", co.ss, "comma list of s anchors");
    cov->add_option("-o,--output", co.output, "output .csv path")->required();

    OperatorOpts oo;
    auto* op = app.add_subcommand("operator", "apply a tempered fractional operator to a field file");
    op->set_help_flag("--help", "print help");
    op->add_option("--input", oo.input, "input .bin path")->required();
    op->add_option("--op", oo.op, "integral|derivative");
    op->add_option("--side", oo.side, "plus|minus");
    op->add_option("--route", oo.route, "time|fourier");
    op->add_option("--alpha", oo.alpha, "order pair a1,a2");
    op->add_option("--lambda", oo.lambda, "tempering pair l1,l2");
    op->add_option("-o,--output", oo.output, "output .bin path")->required();

    VerifyOpts vo;
    auto* ver = app.add_subcommand("verify", "run the verification suites");
    ver->set_help_flag("--help", "print help");
    ver->add_option("--suite", vo.suite, "all|fractional|fieldlaw|wiener");
    ver->add_option("--json", vo.json_path, "write JSON report here");
    ver->add_option("--text", vo.text_path, "write text report here");
    ver->add_flag("--quick", vo.quick, "reduced sweeps, no Monte Carlo");
    ver->add_option("--threads", vo.threads, "internal parallelism cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const std::string command = quote_command(argc, argv);
    try {
        if (sim->parsed()) return run_simulate(so, command);
        if (cov->parsed()) return run_covariance(co, command);
        if (op->parsed()) return run_operator(oo, command);
        if (ver->parsed()) return run_verify(vo);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kUsage;
    } catch (const thfield::UnsupportedRangeError& e) {
        std::fprintf(stderr, "unsupported parameter range: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntime;
    }
    return kUsage;
}
