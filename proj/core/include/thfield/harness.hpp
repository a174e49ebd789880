#pragma once

#include <string>
#include <vector>

namespace thfield {

/// One named verification outcome. pass iff statistic <= tolerance; warn
/// marks documented bias-dominated or vacuous regimes (and deliberate
/// skips, explained in details).
struct CheckResult {
    std::string name;
    enum class Status { pass, fail, warn } status = Status::pass;
    double statistic = 0.0;
    double tolerance = 0.0;
    std::string details;
};

struct FractionalCalcConfig {
    // the identity geometry (domain, bump width, spacing) is tuned for
    // 256 points per axis; the time-route tolerances assume it
    int grid_n = 256;
    std::vector<double> alphas{0.2, 0.5, 1.0};
    std::vector<double> lambdas{0.5, 1.0, 2.0};
    int test_function_count = 1;  // 0 runs the suite vacuously (warn rows)
    double tol_semigroup = 1e-5;
    double tol_roundtrip = 1e-6;
    double tol_ibp = 1e-6;
    double tol_bound_slack = 1e-6;
    double tol_symbol = 1e-8;
    double tol_dual_route = 1e-5;
    double tol_pointwise = 1e-3;
    double tol_reflection = 1e-12;
    bool fault_injection = true;
    int threads = 2;
};

struct FieldLawConfig {
    std::vector<double> hursts{0.6, 0.75, 0.9};
    std::vector<double> lambdas{0.5, 1.0, 2.0};
    std::vector<int> orders{1, 2};
    double tol_cross_oracle = 1e-6;
    double tol_scaling = 1e-6;
    double tol_stationarity = 1e-6;
    double tol_holder_analytic = 0.1;
    double tol_holder_mc = 0.15;
    bool run_mc = true;
    int mc_samples = 20000;
    int mc_samples_k2 = 20000;
    int spectral_modes_mc = 384;
    int spectral_modes_bias = 4096;
    double se_band = 4.0;
    int threads = 2;
};

struct WienerConfig {
    double tol_route_equality = 1e-8;
    double tol_h1_h2 = 1e-6;
    double tol_indicator = 1e-4;
    double tol_semimartingale_identity = 1e-8;
    double tol_semimartingale_var = 0.05;
    int smooth_test_functions = 20;
    bool run_mc = true;
    int mc_samples = 20000;
    int mc_samples_semimartingale = 10000;
    double se_band = 4.0;
    int threads = 2;
};

std::vector<CheckResult> run_fractional_calculus_suite(const FractionalCalcConfig& cfg = {});
std::vector<CheckResult> run_field_law_suite(const FieldLawConfig& cfg = {});
std::vector<CheckResult> run_wiener_suite(const WienerConfig& cfg = {});

bool all_passed(const std::vector<CheckResult>& results);  // warn counts as pass
std::string report_to_text(const std::vector<CheckResult>& results);
std::string report_to_json(const std::vector<CheckResult>& results);

}
