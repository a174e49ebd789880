#include "thfield/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <future>
#include <sstream>

#include "thfield/covariance.hpp"
#include "thfield/errors.hpp"
#include "thfield/fft.hpp"
#include "thfield/kernels.hpp"
#include "thfield/quadrature.hpp"
#include "thfield/simulate.hpp"
#include "thfield/specfun.hpp"
#include "thfield/tfcalc.hpp"
#include "thfield/wiener.hpp"

namespace thfield {

namespace {

using Task = std::pair<std::string, std::function<CheckResult()>>;

std::vector<CheckResult> run_tasks(std::vector<Task> tasks, int threads) {
    std::vector<CheckResult> results(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                results[i] = tasks[i].second();
            } catch (const std::exception& e) {
                results[i] = CheckResult{tasks[i].first, CheckResult::Status::fail, 1.0, 0.0,
                                         std::string("exception: ") + e.what()};
            }
            results[i].name = tasks[i].first;
        }
    };
    std::vector<std::future<void>> pool;
    const int nthreads = std::max(1, threads);
    for (int t = 1; t < nthreads; ++t) pool.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : pool) f.get();
    std::sort(results.begin(), results.end(),
              [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
    return results;
}

CheckResult make_result(std::string name, double statistic, double tolerance,
                        std::string details = {}) {
    CheckResult r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.tolerance = tolerance;
    r.status = (statistic <= tolerance) ? CheckResult::Status::pass : CheckResult::Status::fail;
    r.details = std::move(details);
    return r;
}

CheckResult vacuous(std::string name) {
    CheckResult r;
    r.name = std::move(name);
    r.status = CheckResult::Status::warn;
    r.details = "vacuous: empty test-function set";
    return r;
}

double rel_l2_diff(const Field2D& a, const Field2D& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        num += d * d;
        den += b.values[i] * b.values[i];
    }
    return (den == 0.0) ? std::sqrt(num) : std::sqrt(num / den);
}

// Self-similar geometry for the operator identities: the domain, the test
// bump, and the spacing all scale with 1/lambda per axis so truncated
// kernel tails stay below the residue guard at every tempering rate.
Grid2D op_suite_grid(double l1, double l2, int n) {
    const double wx = 88.0 / l1, wy = 88.0 / l2;
    return Grid2D{-wx, -wy, 2.0 * wx / n, 2.0 * wy / n, n, n};
}

Field2D op_suite_bump(const Grid2D& g) {
    const double wx = -g.x0 / 16.0, wy = -g.y0 / 16.0;
    return tabulate(g, [wx, wy](double x, double y) {
        return std::exp(-(x * x) / (wx * wx) - (y * y) / (wy * wy));
    });
}

Field2D op_suite_bump2(const Grid2D& g) {
    const double wx = -g.x0 / 16.0, wy = -g.y0 / 16.0;
    return tabulate(g, [wx, wy](double x, double y) {
        return std::exp(-((x - wx) * (x - wx)) / (1.7 * wx * wx) -
                        ((y + 0.4 * wy) * (y + 0.4 * wy)) / (1.3 * wy * wy)) *
               std::cos(x / wx);
    });
}

struct Moments {
    double mean = 0, var = 0;
    std::vector<double> batch_vars;  // per-batch variances for SE estimates
    double var_se() const {
        if (batch_vars.size() < 2) return 0.0;
        double m = 0;
        for (double v : batch_vars) m += v;
        m /= batch_vars.size();
        double s = 0;
        for (double v : batch_vars) s += (v - m) * (v - m);
        return std::sqrt(s / (batch_vars.size() - 1) / batch_vars.size());
    }
};

Moments batched_moments(const std::vector<double>& xs, int batches = 20) {
    Moments m;
    const std::size_t n = xs.size();
    double s = 0, s2 = 0;
    for (double x : xs) {
        s += x;
        s2 += x * x;
    }
    m.mean = s / n;
    m.var = s2 / n - m.mean * m.mean;
    const std::size_t bsz = n / batches;
    for (int b = 0; b < batches; ++b) {
        double bs = 0, bs2 = 0;
        for (std::size_t i = b * bsz; i < (b + 1) * bsz; ++i) {
            bs += xs[i];
            bs2 += xs[i] * xs[i];
        }
        const double bm = bs / bsz;
        m.batch_vars.push_back(bs2 / bsz - bm * bm);
    }
    return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// fractional-calculus suite
// ---------------------------------------------------------------------------

std::vector<CheckResult> run_fractional_calculus_suite(const FractionalCalcConfig& cfg) {
    std::vector<Task> tasks;
    const auto& A = cfg.alphas;
    const auto& L = cfg.lambdas;
    const int n = cfg.grid_n;

    if (cfg.test_function_count == 0) {
        std::vector<CheckResult> out;
        for (const char* name :
             {"fractional.semigroup.fourier", "fractional.semigroup.time", "fractional.roundtrip",
              "fractional.ibp", "fractional.bound", "fractional.symbol", "fractional.dual_route",
              "fractional.reflection", "fractional.pointwise_derivative"})
            out.push_back(vacuous(name));
        return out;
    }

    tasks.emplace_back("fractional.semigroup.fourier", [=]() {
        double worst = 0;
        int rows = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const Field2D f = op_suite_bump(g);
                for (double a1 : A)
                    for (double a2 : A)
                        for (double b1 : A)
                            for (double b2 : A) {
                                const FracOrder oa{a1, a2, l1, l2}, ob{b1, b2, l1, l2};
                                const FracOrder oab{a1 + b1, a2 + b2, l1, l2};
                                const Field2D lhs =
                                    frac_integral_fourier(oa, Side::plus,
                                                          frac_integral_fourier(ob, Side::plus, f));
                                const Field2D rhs = frac_integral_fourier(oab, Side::plus, f);
                                worst = std::max(worst, rel_l2_diff(lhs, rhs));
                                ++rows;
                            }
            }
        return make_result("", worst, cfg.tol_semigroup,
                           "worst relative L2 residual over " + std::to_string(rows) + " rows");
    });

    tasks.emplace_back("fractional.semigroup.time", [=]() {
        double worst = 0;
        int rows = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const Field2D f = op_suite_bump(g);
                for (double a : A)
                    for (double b : A) {
                        const FracOrder oa{a, a, l1, l2}, ob{b, b, l1, l2};
                        const FracOrder oab{a + b, a + b, l1, l2};
                        const Field2D lhs =
                            frac_integral(oa, Side::plus, frac_integral(ob, Side::plus, f));
                        const Field2D rhs = frac_integral(oab, Side::plus, f);
                        worst = std::max(worst, rel_l2_diff(lhs, rhs));
                        ++rows;
                    }
            }
        return make_result("", worst, cfg.tol_semigroup,
                           "worst relative L2 residual over " + std::to_string(rows) + " rows");
    });

    tasks.emplace_back("fractional.roundtrip", [=]() {
        double worst = 0;
        int rows = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const Field2D f = op_suite_bump(g);
                for (double a1 : A)
                    for (double a2 : A) {
                        const FracOrder o{a1, a2, l1, l2};
                        const Field2D di = frac_derivative_fourier(
                            o, Side::plus, frac_integral_fourier(o, Side::plus, f));
                        const Field2D id = frac_integral_fourier(
                            o, Side::minus, frac_derivative_fourier(o, Side::minus, f));
                        const Field2D mixed = frac_derivative_fourier(
                            o, Side::plus, frac_integral(o, Side::plus, f));
                        worst = std::max({worst, rel_l2_diff(di, f), rel_l2_diff(id, f),
                                          rel_l2_diff(mixed, f)});
                        rows += 3;
                    }
            }
        return make_result("", worst, cfg.tol_roundtrip,
                           "D(I f) = f and I(D f) = f, both routes, " + std::to_string(rows) +
                               " rows");
    });

    tasks.emplace_back("fractional.ibp", [=]() {
        double worst = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const Field2D f = op_suite_bump(g);
                const Field2D h = op_suite_bump2(g);
                const double scale = l2_norm(f) * l2_norm(h);
                for (double a : A) {
                    const FracOrder o{a, a, l1, l2};
                    const double lhs_t = l2_inner(f, frac_integral(o, Side::plus, h));
                    const double rhs_t = l2_inner(frac_integral(o, Side::minus, f), h);
                    const double lhs_f = l2_inner(f, frac_integral_fourier(o, Side::plus, h));
                    const double rhs_f = l2_inner(frac_integral_fourier(o, Side::minus, f), h);
                    worst = std::max({worst, std::abs(lhs_t - rhs_t) / scale,
                                      std::abs(lhs_f - rhs_f) / scale});
                }
            }
        return make_result("", worst, cfg.tol_ibp, "<f, I+ g> vs <I- f, g>, both routes");
    });

    tasks.emplace_back("fractional.bound", [=]() {
        double worst_ratio = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                for (const Field2D& f : {op_suite_bump(g), op_suite_bump2(g)}) {
                    const double nf = l2_norm(f);
                    for (double a1 : A)
                        for (double a2 : A) {
                            const FracOrder o{a1, a2, l1, l2};
                            const double cap = std::pow(l1, -a1) * std::pow(l2, -a2) * nf;
                            const double nt = l2_norm(frac_integral(o, Side::plus, f));
                            const double nf2 = l2_norm(frac_integral_fourier(o, Side::minus, f));
                            worst_ratio = std::max({worst_ratio, nt / cap, nf2 / cap});
                        }
                }
            }
        return make_result("", worst_ratio, 1.0 + cfg.tol_bound_slack,
                           "worst ||I f|| / (lambda^-alpha ||f||)");
    });

    tasks.emplace_back("fractional.symbol", [=]() {
        // band-limited test function: Gaussian spectrum, sigma_xi = 0.04/h
        double worst = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const double sx = 0.055 / g.dx, sy = 0.055 / g.dy;
                const Field2D f = tabulate(g, [&](double x, double y) {
                    return std::exp(-0.5 * (sx * sx * x * x + sy * sy * y * y));
                });
                for (double a : A) {
                    const FracOrder o{a, a, l1, l2};
                    const Field2D ift = frac_integral(o, Side::plus, f);
                    // compare spectra on the unpadded grid
                    std::vector<std::complex<double>> bf(g.size()), bi(g.size());
                    for (std::size_t i = 0; i < g.size(); ++i) {
                        bf[i] = f.values[i];
                        bi[i] = ift.values[i];
                    }
                    fft::forward2d(bf.data(), g.nx, g.ny);
                    fft::forward2d(bi.data(), g.nx, g.ny);
                    double fmax = 0;
                    for (auto& c : bf) fmax = std::max(fmax, std::abs(c));
                    double w = 0;
                    for (int i = 0; i < g.nx; ++i) {
                        const double xi = fft::dft_frequency(i, g.nx, g.dx);
                        const std::complex<double> mx =
                            std::pow(std::complex<double>(l1, xi), -a);
                        for (int j = 0; j < g.ny; ++j) {
                            const double om = fft::dft_frequency(j, g.ny, g.dy);
                            const std::complex<double> sym =
                                mx * std::pow(std::complex<double>(l2, om), -a);
                            const std::size_t idx = g.index(i, j);
                            w = std::max(w, std::abs(bi[idx] - bf[idx] * sym));
                        }
                    }
                    worst = std::max(worst, w / fmax);
                }
            }
        return make_result("", worst, cfg.tol_symbol,
                           "max pointwise |F[I f] - F[f] symbol| / max|F[f]|, time route");
    });

    if (cfg.fault_injection) {
        tasks.emplace_back("fractional.fault.symbol_detects", [=]() {
            // re-run one symbol row against a deliberately wrong exponent;
            // the check must fail or the harness itself is broken
            const double l1 = L.front(), l2 = L.front();
            const Grid2D g = op_suite_grid(l1, l2, n);
            const double sx = 0.055 / g.dx, sy = 0.055 / g.dy;
            const Field2D f = tabulate(g, [&](double x, double y) {
                return std::exp(-0.5 * (sx * sx * x * x + sy * sy * y * y));
            });
            const double a = A.front();
            const FracOrder o{a, a, l1, l2};
            const Field2D ift = frac_integral(o, Side::plus, f);
            std::vector<std::complex<double>> bf(g.size()), bi(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) {
                bf[i] = f.values[i];
                bi[i] = ift.values[i];
            }
            fft::forward2d(bf.data(), g.nx, g.ny);
            fft::forward2d(bi.data(), g.nx, g.ny);
            double fmax = 0;
            for (auto& c : bf) fmax = std::max(fmax, std::abs(c));
            double w = 0;
            for (int i = 0; i < g.nx; ++i) {
                const double xi = fft::dft_frequency(i, g.nx, g.dx);
                const std::complex<double> mx =
                    std::pow(std::complex<double>(l1, xi), -(a + 0.05));  // planted fault
                for (int j = 0; j < g.ny; ++j) {
                    const double om = fft::dft_frequency(j, g.ny, g.dy);
                    const std::complex<double> sym = mx * std::pow(std::complex<double>(l2, om), -a);
                    const std::size_t idx = g.index(i, j);
                    w = std::max(w, std::abs(bi[idx] - bf[idx] * sym));
                }
            }
            const bool detected = (w / fmax) > cfg.tol_symbol;
            std::ostringstream det;
            det << "perturbed-exponent residual " << w / fmax << " must exceed " << cfg.tol_symbol;
            return make_result("", detected ? 0.0 : 1.0, 0.5, det.str());
        });
    }

    tasks.emplace_back("fractional.dual_route", [=]() {
        double worst = 0;
        for (double l1 : L)
            for (double l2 : L) {
                const Grid2D g = op_suite_grid(l1, l2, n);
                const Field2D f = op_suite_bump(g);
                for (double a1 : A)
                    for (double a2 : A) {
                        const FracOrder o{a1, a2, l1, l2};
                        for (Side s : {Side::plus, Side::minus}) {
                            const Field2D t = frac_integral(o, s, f);
                            const Field2D ff = frac_integral_fourier(o, s, f);
                            worst = std::max(worst, rel_l2_diff(t, ff));
                        }
                    }
            }
        return make_result("", worst, cfg.tol_dual_route,
                           "time-domain vs Fourier-multiplier route, both sides");
    });

    tasks.emplace_back("fractional.reflection", [=]() {
        const FracOrder o{0.4, 0.6, 1.0, 0.5};
        const int m = n - 1;  // odd count, nodes symmetric about the origin
        const double h = 16.0 / n;
        const Grid2D gs{-h * (m - 1) / 2.0, -h * (m - 1) / 2.0, h, h, m, m};
        const Field2D fs = tabulate(gs, [](double x, double y) {
            return std::exp(-(x * x + y * y)) * (1 + 0.3 * x - 0.2 * y);
        });
        Field2D qf(gs);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) qf.at(i, j) = fs.at(m - 1 - i, m - 1 - j);
        const Field2D lhs = frac_integral(o, Side::plus, qf);
        const Field2D rhs0 = frac_integral(o, Side::minus, fs);
        Field2D rhs(gs);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) rhs.at(i, j) = rhs0.at(m - 1 - i, m - 1 - j);
        return make_result("", rel_l2_diff(lhs, rhs), cfg.tol_reflection,
                           "Q I+- f = I-+ Q f on an origin-symmetric grid (side swap forced "
                           "by the kernel reflection)");
    });

    tasks.emplace_back("fractional.pointwise_derivative", [=]() {
        double worst = 0;
        for (double l1 : L) {
            const Grid2D g = op_suite_grid(l1, l1, n);
            const Field2D f = op_suite_bump(g);
            for (double a : A) {
                if (a >= 1.0) continue;  // pointwise form holds for alpha < 1
                const FracOrder o{a, 0.45, l1, l1};
                const Field2D dp = frac_derivative_pointwise(o, Side::plus, f);
                const Field2D df = frac_derivative_fourier(o, Side::plus, f);
                worst = std::max(worst, rel_l2_diff(dp, df));
            }
        }
        return make_result("", worst, cfg.tol_pointwise,
                           "tempered Marchaud form vs Fourier definition");
    });

    return run_tasks(std::move(tasks), cfg.threads);
}

// ---------------------------------------------------------------------------
// field-law suite
// ---------------------------------------------------------------------------

std::vector<CheckResult> run_field_law_suite(const FieldLawConfig& cfg) {
    std::vector<Task> tasks;

    tasks.emplace_back("fieldlaw.cross_oracle", [=]() {
        double worst = 0;
        int rows = 0;
        for (int k : cfg.orders)
            for (double h1 : cfg.hursts)
                for (double h2 : cfg.hursts)
                    for (double l1 : cfg.lambdas)
                        for (double l2 : cfg.lambdas) {
                            const FieldParams p{k, h1, h2, l1, l2};
                            const double t = 1.0, s = 0.7;
                            const double cov = covariance(p, {{t, s}, {t, s}});
                            const double nrm = gamma_fn(k + 1.0) * kernel_l2_norm_sq(p, t, s);
                            worst = std::max(worst, std::abs(cov - nrm) / nrm);
                            ++rows;
                        }
        return make_result("", worst, cfg.tol_cross_oracle,
                           "covariance diagonal vs k! kernel norm, " + std::to_string(rows) +
                               " rows");
    });

    tasks.emplace_back("fieldlaw.scaling", [=]() {
        const std::vector<std::pair<double, double>> hps{{0.6, 0.8}, {0.75, 0.75}, {0.9, 0.6}};
        const std::vector<std::pair<double, double>> lps{{1, 1}, {0.5, 2}, {2, 1}};
        const std::vector<std::pair<double, double>> sps{{1, 1}, {2, 0.5}, {3, 3}};
        double worst = 0;
        bool identity_exact = true;
        for (auto [h1, h2] : hps)
            for (auto [l1, l2] : lps)
                for (auto [s1, s2] : sps) {
                    for (int k : cfg.orders) {
                        const FieldParams p{k, h1, h2, l1, l2};
                        const double r =
                            scaling_identity_residual(p, {s1, s2}, {{1, 1}, {0.5, 2}});
                        if (s1 == 1.0 && s2 == 1.0 && r != 0.0) identity_exact = false;
                        worst = std::max(worst, r);
                    }
                }
        return make_result("", identity_exact ? worst : 1.0, cfg.tol_scaling,
                           "tempered scaling law at covariance level, 3x3x3 sweep x orders; "
                           "h=(1,1) row exact");
    });

    tasks.emplace_back("fieldlaw.stationarity.analytic", [=]() {
        double worst = 0;
        for (int k : cfg.orders) {
            const FieldParams p{k, 0.7, 0.9, 1.0, 2.0};
            const double ref = increment_variance(p, {0, 0}, {0.5, 0.8});
            for (auto base : {std::pair{2.3, 1.7}, {0.4, 3.0}, {1.1, 0.2}}) {
                const double v = increment_variance(p, base, {0.5, 0.8});
                worst = std::max(worst, std::abs(v - ref) / ref);
            }
        }
        return make_result("", worst, cfg.tol_stationarity,
                           "rectangular-increment variance is base independent");
    });

    tasks.emplace_back("fieldlaw.holder.analytic", [=]() {
        double worst = 0;
        std::ostringstream det;
        for (double H : {0.7, 1.5}) {
            for (int axis : {0, 1}) {
                const FieldParams p{1, axis == 0 ? H : 0.8, axis == 0 ? 0.8 : H, 1.0, 1.0};
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                int m = 0;
                for (int j = 0; j <= 6; ++j) {
                    const double z = std::pow(2.0, -j);
                    const double v = increment_variance(
                        p, {0.9, 1.1}, axis == 0 ? std::pair{z, 1.0} : std::pair{1.0, z});
                    const double X = std::log(z), Y = std::log(v);
                    sx += X;
                    sy += Y;
                    sxx += X * X;
                    sxy += X * Y;
                    ++m;
                }
                const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
                const double want = std::min(2.0 * H, 2.0);
                det << "H=" << H << " axis=" << axis << " slope=" << slope << "; ";
                worst = std::max(worst, std::abs(slope - want));
            }
        }
        return make_result("", worst, cfg.tol_holder_analytic, det.str());
    });

    tasks.emplace_back("fieldlaw.psd", [=]() {
        const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
        std::vector<std::pair<double, double>> anchors;
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) anchors.emplace_back(0.5 * i, 0.5 * j);
        const Eigen::MatrixXd m = covariance_matrix(p, anchors);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        const double mineig = es.eigenvalues().minCoeff();
        const double stat = std::max(0.0, -mineig);
        return make_result("", stat, 1e-10 * m.trace(), "covariance Gram matrix min eigenvalue");
    });

    tasks.emplace_back("fieldlaw.monotonicity", [=]() {
        const FieldParams p{2, 0.8, 0.6, 2.0, 1.0};
        const double base = covariance(p, {{1.0, 0.5}, {0.8, 0.9}});
        double stat = 0.0;
        if (covariance(p, {{1.2, 0.5}, {0.8, 0.9}}) <= base) stat = 1.0;
        if (covariance(p, {{1.0, 0.7}, {0.8, 0.9}}) <= base) stat = 1.0;
        if (covariance(p, {{1.0, 0.5}, {0.8, 1.1}}) <= base) stat = 1.0;
        return make_result("", stat, 0.5, "covariance nondecreasing in each coordinate");
    });

    tasks.emplace_back("fieldlaw.stress.h051", [=]() {
        const FieldParams p{1, 0.51, 0.51, 1.0, 1.0};
        const double cov = covariance(p, {{1, 1}, {1, 1}});
        const double nrm = kernel_l2_norm_sq(p, 1.0, 1.0);
        CheckResult r = make_result("", std::abs(cov - nrm) / nrm, 1e-5,
                                    "near-singular quadrature regime (H close to 1/2)");
        if (r.status == CheckResult::Status::pass) r.status = CheckResult::Status::warn;
        return r;
    });

    if (cfg.run_mc) {
        tasks.emplace_back("fieldlaw.sampler.cholesky", [=]() {
            const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
            const Grid2D anchors{0.25, 0.25, 0.25, 0.25, 8, 8};
            const Order1CholeskySampler sampler(p, anchors);
            const Eigen::MatrixXd& cov = sampler.covariance();
            const int m = static_cast<int>(cov.rows());
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
            for (int s = 0; s < cfg.mc_samples; ++s) {
                const SamplePath path = sampler.sample({2024, static_cast<std::uint64_t>(s)});
                Eigen::Map<const Eigen::VectorXd> v(path.values.data(), m);
                acc.selfadjointView<Eigen::Lower>().rankUpdate(v);
            }
            acc /= cfg.mc_samples;
            double worst_z = 0;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j <= i; ++j) {
                    const double se = std::sqrt(
                        (cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / cfg.mc_samples);
                    worst_z = std::max(worst_z, std::abs(acc(i, j) - cov(i, j)) / se);
                }
            return make_result("", worst_z, cfg.se_band,
                               "worst |z| of empirical vs analytic covariance entries, N=" +
                                   std::to_string(cfg.mc_samples));
        });

        tasks.emplace_back("fieldlaw.sampler.ma_k1", [=]() {
            const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
            const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
            const Grid2D ng = suggest_noise_grid(p, anchors);
            std::vector<int> ba, bb;
            const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
            const MovingAverageScheme scheme(p, q, ng);
            const double disc = scheme.discrete_variance(ba[0], bb[0]);
            const double analytic = covariance(p, {{1, 1}, {1, 1}});
            const double bias = std::abs(disc - analytic) / analytic;
            std::vector<double> vals(cfg.mc_samples);
            for (int s = 0; s < cfg.mc_samples; ++s) {
                const NoiseGrid noise = make_noise_grid(ng, {31, static_cast<std::uint64_t>(s)});
                vals[s] = scheme.field_cell_major(noise, ba, bb)[0];
            }
            const Moments mo = batched_moments(vals);
            const double stat = std::abs(mo.var - analytic) / analytic;
            std::ostringstream det;
            det << "emp " << mo.var << " vs analytic " << analytic << " (discretization bias "
                << bias * 100 << "%, z vs discrete " << (mo.var - disc) / mo.var_se() << ")";
            return make_result("", stat, 0.05 + bias, det.str());
        });

        tasks.emplace_back("fieldlaw.sampler.ma_k2", [=]() {
            const FieldParams p{2, 0.75, 0.75, 1.0, 1.0};
            const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
            const Grid2D ng{1.0 - 64 * 0.125, 1.0 - 64 * 0.125, 0.125, 0.125, 64, 64};
            std::vector<int> ba, bb;
            const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
            const MovingAverageScheme scheme(p, q, ng);
            const double disc = scheme.discrete_variance(ba[0], bb[0]);
            std::vector<double> vals(cfg.mc_samples_k2);
            for (int s = 0; s < cfg.mc_samples_k2; ++s) {
                const NoiseGrid noise = make_noise_grid(ng, {32, static_cast<std::uint64_t>(s)});
                vals[s] = scheme.field_node_major(noise, ba, bb)[0];
            }
            const Moments mo = batched_moments(vals);
            const double z = std::abs(mo.var - disc) / mo.var_se();
            std::ostringstream det;
            det << "empirical " << mo.var << " vs exact discrete second moment " << disc
                << " at 64^2 noise cells, N=" << cfg.mc_samples_k2;
            return make_result("", z, cfg.se_band, det.str());
        });

        tasks.emplace_back("fieldlaw.sampler.ma_k2.convention", [=]() {
            // the discretized double Wiener integral approaches the analytic
            // covariance at rate h^(2H-1); extrapolate the exact discrete
            // variances of two refinement levels and compare against the
            // 2!-convention value (a missing 2! would sit at half)
            const FieldParams p{2, 0.75, 0.75, 1.0, 1.0};
            const double analytic = covariance(p, {{1, 1}, {1, 1}});
            const double rate = 2.0 * 0.75 - 1.0;
            double var16 = 0, var32 = 0;
            for (int lev : {16, 32}) {
                const double dx = 1.0 / lev;
                const int wcells = static_cast<int>(std::ceil(9.0 / dx));
                const Grid2D ng{1.0 - wcells * dx, 1.0 - wcells * dx, dx, dx, wcells, wcells};
                const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
                std::vector<int> ba, bb;
                const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
                const MovingAverageScheme scheme(p, q, ng);
                (lev == 16 ? var16 : var32) = scheme.discrete_variance(ba[0], bb[0]);
            }
            const double f = std::pow(2.0, rate);
            const double extrap = (f * var32 - var16) / (f - 1.0);
            const double stat = std::abs(extrap - analytic) / analytic;
            std::ostringstream det;
            det << "levels (" << var16 << ", " << var32 << ") -> " << extrap << " vs analytic "
                << analytic << " (rate " << rate << ")";
            return make_result("", stat, 0.07, det.str());
        });

        tasks.emplace_back("fieldlaw.sampler.k2_kurtosis", [=]() {
            const FieldParams p{2, 0.75, 0.75, 1.0, 1.0};
            const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
            const Grid2D ng{1.0 - 48 * 0.125, 1.0 - 48 * 0.125, 0.125, 0.125, 48, 48};
            std::vector<int> ba, bb;
            const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
            const MovingAverageScheme scheme(p, q, ng);
            const int N = cfg.mc_samples_k2;
            std::vector<double> vals(N);
            for (int s = 0; s < N; ++s) {
                const NoiseGrid noise = make_noise_grid(ng, {33, static_cast<std::uint64_t>(s)});
                vals[s] = scheme.field_node_major(noise, ba, bb)[0];
            }
            // batch estimates of the excess kurtosis
            const int B = 20;
            const int bsz = N / B;
            std::vector<double> g2(B);
            for (int b = 0; b < B; ++b) {
                double m1 = 0, m2 = 0, m4 = 0;
                for (int i = b * bsz; i < (b + 1) * bsz; ++i) m1 += vals[i];
                m1 /= bsz;
                for (int i = b * bsz; i < (b + 1) * bsz; ++i) {
                    const double d = vals[i] - m1;
                    m2 += d * d;
                    m4 += d * d * d * d;
                }
                m2 /= bsz;
                m4 /= bsz;
                g2[b] = m4 / (m2 * m2) - 3.0;
            }
            double mean = 0;
            for (double v : g2) mean += v;
            mean /= B;
            double sd = 0;
            for (double v : g2) sd += (v - mean) * (v - mean);
            sd = std::sqrt(sd / (B - 1) / B);
            const double z = mean / sd;
            std::ostringstream det;
            det << "excess kurtosis " << mean << " (SE " << sd << "), non-Gaussian at k=2";
            // pass iff z >= 3: statistic = 3 - z <= 0
            return make_result("", 3.0 - z, 0.0, det.str());
        });

        tasks.emplace_back("fieldlaw.sampler.spectral", [=]() {
            const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
            const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
            const Grid2D fg = suggest_freq_grid(p, cfg.spectral_modes_mc);
            const double lattice = spectral_lattice_variance(p, fg, 1.0, 1.0);
            const double analytic = covariance(p, {{1, 1}, {1, 1}});
            const int N = 5000;
            std::vector<double> vals(N);
            for (int s = 0; s < N; ++s)
                vals[s] =
                    sample_order1_spectral(p, anchors, fg, {34, static_cast<std::uint64_t>(s)})
                        .values[0];
            const Moments mo = batched_moments(vals);
            const double stat = std::abs(mo.var - analytic) / analytic;
            std::ostringstream det;
            det << "emp " << mo.var << " vs analytic " << analytic << "; lattice bias "
                << 100 * std::abs(lattice - analytic) / analytic << "%, z vs lattice "
                << (mo.var - lattice) / mo.var_se();
            return make_result("", stat, 0.05, det.str());
        });

        tasks.emplace_back("fieldlaw.sampler.spectral.bias_at_cutoff", [=]() {
            const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
            const Grid2D fg = suggest_freq_grid(p, cfg.spectral_modes_bias);
            const double lattice = spectral_lattice_variance(p, fg, 1.0, 1.0);
            const double analytic = covariance(p, {{1, 1}, {1, 1}});
            return make_result("", std::abs(lattice - analytic) / analytic, 0.05,
                               "lattice-exact variance at the stated cutoff and mode count");
        });

        tasks.emplace_back("fieldlaw.stationarity.mc", [=]() {
            const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
            const std::pair<double, double> b1{0, 0}, b2{1.2, 0.7};
            const double z1 = 0.5, z2 = 0.8;
            std::vector<std::pair<double, double>> pts{
                {b1.first + z1, b1.second + z2}, {b1.first, b1.second + z2},
                {b1.first + z1, b1.second},      {b1.first, b1.second},
                {b2.first + z1, b2.second + z2}, {b2.first, b2.second + z2},
                {b2.first + z1, b2.second},      {b2.first, b2.second}};
            const ListCholeskySampler sampler(p, pts);
            std::vector<double> d1(cfg.mc_samples), d2(cfg.mc_samples);
            for (int s = 0; s < cfg.mc_samples; ++s) {
                const auto v = sampler.sample({35, static_cast<std::uint64_t>(s)});
                d1[s] = v[0] - v[1] - v[2] + v[3];
                d2[s] = v[4] - v[5] - v[6] + v[7];
            }
            const Moments m1 = batched_moments(d1), m2 = batched_moments(d2);
            const double se = std::sqrt(m1.var_se() * m1.var_se() + m2.var_se() * m2.var_se());
            const double z = std::abs(m1.var - m2.var) / se;
            std::ostringstream det;
            det << "increment variances " << m1.var << " vs " << m2.var << " at two bases";
            return make_result("", z, cfg.se_band, det.str());
        });

        tasks.emplace_back("fieldlaw.holder.mc", [=]() {
            double worst = 0;
            std::ostringstream det;
            for (double H : {0.7, 1.5}) {
                const FieldParams p{1, H, 0.8, 1.0, 1.0};
                std::vector<std::pair<double, double>> pts;
                for (int j = 0; j <= 6; ++j) pts.emplace_back(std::pow(2.0, -j), 1.0);
                const ListCholeskySampler sampler(p, pts);
                std::vector<std::vector<double>> vals(pts.size(),
                                                      std::vector<double>(cfg.mc_samples));
                for (int s = 0; s < cfg.mc_samples; ++s) {
                    const auto v = sampler.sample({36, static_cast<std::uint64_t>(s)});
                    for (std::size_t i = 0; i < pts.size(); ++i) vals[i][s] = v[i];
                }
                double sx = 0, sy = 0, sxx = 0, sxy = 0;
                int m = 0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const Moments mo = batched_moments(vals[i]);
                    const double X = std::log(pts[i].first), Y = std::log(mo.var);
                    sx += X;
                    sy += Y;
                    sxx += X * X;
                    sxy += X * Y;
                    ++m;
                }
                const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
                const double want = std::min(2.0 * H, 2.0);
                det << "H=" << H << " slope=" << slope << "; ";
                worst = std::max(worst, std::abs(slope - want));
            }
            return make_result("", worst, cfg.tol_holder_mc, det.str());
        });

        tasks.emplace_back("fieldlaw.scaling.mc", [=]() {
            // Z_lambda(h1 t, h2 s) vs h1^H1 h2^H2 Z_(h1 l, h2 l)(t, s) in law:
            // both Gaussian, so matched covariance matrices settle it
            const FieldParams p{1, 0.7, 0.9, 1.0, 2.0};
            const double s1 = 2.0, s2 = 0.5;
            std::vector<std::pair<double, double>> base{{1, 1}, {0.5, 2}, {2, 0.5}};
            std::vector<std::pair<double, double>> scaled;
            for (auto [t, s] : base) scaled.emplace_back(s1 * t, s2 * s);
            const ListCholeskySampler sa(p, scaled);
            FieldParams p2 = p;
            p2.lambda1 *= s1;
            p2.lambda2 *= s2;
            const ListCholeskySampler sb(p2, base);
            const double amp = std::pow(s1, p.H1) * std::pow(s2, p.H2);
            const int N = cfg.mc_samples / 2;
            std::vector<double> prod_a(N), prod_b(N);
            for (int s = 0; s < N; ++s) {
                const auto va = sa.sample({37, static_cast<std::uint64_t>(s)});
                const auto vb = sb.sample({38, static_cast<std::uint64_t>(s)});
                prod_a[s] = va[0] * va[1];
                prod_b[s] = amp * vb[0] * amp * vb[1];
            }
            const Moments ma = batched_moments(prod_a), mb = batched_moments(prod_b);
            const double se = std::sqrt(ma.var / N + mb.var / N);
            const double z = std::abs(ma.mean - mb.mean) / se;
            std::ostringstream det;
            det << "cross moment " << ma.mean << " vs " << mb.mean << " (independent seeds)";
            return make_result("", z, cfg.se_band, det.str());
        });
    }

    return run_tasks(std::move(tasks), cfg.threads);
}

// ---------------------------------------------------------------------------
// wiener suite
// ---------------------------------------------------------------------------

namespace {

// 1-D spectral reference for the weighted norm of the unit-interval
// indicator, mirroring the 2-D implementation's padding and frequency
// handling; separability makes the product of axes exactly the 2-D value.
double h2_axis_reference(double H, double lambda, double h) {
    const double b = H - 0.5;
    // indicator of [0,1] cell-averaged on [-2, 3)
    const int n = static_cast<int>(std::lround(5.0 / h));
    const double want = std::max(0.0, 32.0 / lambda - n * h);
    const int mpad = static_cast<int>(std::ceil(0.5 * want / h));
    const int np = fft::next_fast_size(n + 2 * mpad);
    std::vector<std::complex<double>> buf(np, 0.0);
    for (int i = 0; i < n; ++i) {
        const double c = -2.0 + (i + 0.5) * h;
        const double lo = std::max(0.0, c - 0.5 * h), hi = std::min(1.0, c + 0.5 * h);
        buf[i + mpad] = std::max(0.0, hi - lo) / h;
    }
    fft::forward2d(buf.data(), np, 1);
    double acc = 0.0;
    for (int m = 0; m < np; ++m) {
        const double xi = fft::dft_frequency(m, np, h);
        acc += std::pow(lambda * lambda + xi * xi, -b) * std::norm(buf[m]);
    }
    const double g = gamma_fn(b);
    return g * g * acc * h / np;
}

Field2D indicator_cell_avg(const Grid2D& g) {
    Field2D f(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) {
            auto frac = [&](double c, double hh) {
                const double lo = std::max(0.0, c - 0.5 * hh), hi = std::min(1.0, c + 0.5 * hh);
                return std::max(0.0, hi - lo) / hh;
            };
            f.at(i, j) = frac(g.node_x(i), g.dx) * frac(g.node_y(j), g.dy);
        }
    return f;
}

}  // namespace

std::vector<CheckResult> run_wiener_suite(const WienerConfig& cfg) {
    std::vector<Task> tasks;

    tasks.emplace_back("wiener.route_equality", [=]() {
        const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
        const Grid2D anchors{0.25, 0.25, 0.25, 0.25, 8, 8};
        const Grid2D ng = suggest_noise_grid(p, anchors);
        std::vector<int> ba, bb;
        const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
        const MovingAverageScheme scheme(p, q, ng);
        const NoiseGrid noise = make_noise_grid(ng, {41, 0});
        const auto z = scheme.field_cell_major(noise, ba, bb);
        SamplePath path;
        path.params = p;
        path.anchors = anchors;
        path.method = SampleMethod::moving_average;
        path.values.assign(anchors.size(), 0.0);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) path.values[anchors.index(i, j)] = z[i * 8 + j];
        const ElementaryFunction ef{{{2.0, 0.0, 1.0, 0.0, 1.0}, {-1.5, 0.25, 0.75, 0.5, 1.25}}};
        const double ie = integrate_elementary(p, ef, path);
        const Grid2D nodeg{q.da / 2, q.db / 2, q.da, q.db, q.nqa, q.nqb};
        const Field2D fel = tabulate(nodeg, [&](double t, double s) { return ef(t, s); });
        const double iw = integrate_via_white_noise(p, fel, noise);
        return make_result("", std::abs(ie - iw) / std::max(1e-300, std::abs(ie)),
                           cfg.tol_route_equality,
                           "elementary-increment route vs white-noise route on shared noise");
    });

    tasks.emplace_back("wiener.h1_h2_agreement", [=]() {
        const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
        const Grid2D g{0.0, 0.0, 4.0 / 128, 4.0 / 128, 128, 128};
        std::vector<Field2D> fs;
        for (int t = 0; t < cfg.smooth_test_functions; ++t) {
            const double cx = 1.0 + 2.0 * rng::uniform_at({52, static_cast<std::uint64_t>(t)}, 0);
            const double cy = 1.0 + 2.0 * rng::uniform_at({52, static_cast<std::uint64_t>(t)}, 1);
            const double w = 3.0 + 6.0 * rng::uniform_at({52, static_cast<std::uint64_t>(t)}, 2);
            const double ph = rng::uniform_at({52, static_cast<std::uint64_t>(t)}, 3) * 3.0;
            fs.push_back(tabulate(g, [=](double x, double y) {
                return std::exp(-w * ((x - cx) * (x - cx) + (y - cy) * (y - cy))) *
                       std::cos(ph * x + 0.5 * ph * y);
            }));
        }
        if (fs.empty()) {
            return vacuous("");
        }
        // transform each field once (the pair inner products are then plain
        // L2 sums, same formula as inner_product_H1, spot-checked below)
        const FracOrder beta = beta_of(p);
        const double wx = tempered_power_tail_cutoff(beta.alpha1, beta.lambda1, 1e-12);
        const double wy = tempered_power_tail_cutoff(beta.alpha2, beta.lambda2, 1e-12);
        const int mx = static_cast<int>(std::ceil(wx / g.dx)) + 3;
        const int my = static_cast<int>(std::ceil(wy / g.dy)) + 3;
        Grid2D pg = g;
        pg.nx += mx + 3;
        pg.ny += my + 3;
        pg.x0 -= mx * pg.dx;
        pg.y0 -= my * pg.dy;
        std::vector<Field2D> transformed;
        for (const auto& f : fs) {
            Field2D fp(pg);
            for (int i = 0; i < g.nx; ++i)
                for (int j = 0; j < g.ny; ++j) fp.at(i + mx, j + my) = f.at(i, j);
            transformed.push_back(frac_integral(beta, Side::minus, fp));
        }
        const double gg = gamma_fn(p.H1 - 0.5) * gamma_fn(p.H2 - 0.5);
        auto h1_of = [&](std::size_t i, std::size_t j) {
            return gg * gg * l2_inner(transformed[i], transformed[j]);
        };
        double worst = 0;
        std::vector<double> diag(fs.size());
        for (std::size_t i = 0; i < fs.size(); ++i) diag[i] = inner_product_H2(p, fs[i], fs[i]);
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i; j < fs.size(); ++j) {
                const double a = h1_of(i, j);
                const double b = inner_product_H2(p, fs[i], fs[j]);
                worst = std::max(worst, std::abs(a - b) / std::sqrt(diag[i] * diag[j]));
            }
        // the public entry point computes the same numbers
        const double api = inner_product_H1(p, fs[0], fs[1 % fs.size()]);
        const double own = h1_of(0, 1 % fs.size());
        double api_dev = std::abs(api - own) / std::max(1.0, std::abs(own));
        return make_result("", std::max(worst, api_dev > 1e-10 ? 1.0 : worst), cfg.tol_h1_h2,
                           "time-domain vs spectral inner product on random smooth fields");
    });

    tasks.emplace_back("wiener.indicator_variance", [=]() {
        const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
        const double analytic = covariance(p, {{1, 1}, {1, 1}});
        const double ax = h2_axis_reference(p.H1, p.lambda1, 1.0 / 512);
        const double ay = h2_axis_reference(p.H2, p.lambda2, 1.0 / 512);
        const double ref = ax * ay;
        const double stat = std::abs(ref - analytic) / analytic;
        std::ostringstream det;
        det << "weighted spectral norm of 1_[0,1]^2 " << ref << " vs Var(Z(1,1)) " << analytic;
        return make_result("", stat, cfg.tol_indicator, det.str());
    });

    tasks.emplace_back("wiener.indicator_impl_consistency", [=]() {
        // the 2-D implementation factorizes exactly on separable fields;
        // pin it against the per-axis reference at matched resolution
        const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
        const double h = 1.0 / 32;
        const int n = static_cast<int>(std::lround(5.0 / h));
        const Grid2D g{-2.0 + 0.5 * h, -2.0 + 0.5 * h, h, h, n, n};
        const Field2D f = indicator_cell_avg(g);
        const double impl = inner_product_H2(p, f, f);
        const double ref = h2_axis_reference(p.H1, p.lambda1, h) *
                           h2_axis_reference(p.H2, p.lambda2, h);
        return make_result("", std::abs(impl - ref) / ref, 1e-9,
                           "2-D spectral form vs separable per-axis evaluation");
    });

    tasks.emplace_back("wiener.refinement", [=]() {
        // piecewise-constant approximations of a smooth bump approach it in
        // the H1 norm under dyadic refinement
        const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
        const Grid2D fine{1.0 / 64, 1.0 / 64, 1.0 / 32, 1.0 / 32, 64, 64};
        const auto bump = [](double t, double s) {
            return std::exp(-8.0 * ((t - 1) * (t - 1) + (s - 1) * (s - 1)));
        };
        const Field2D f = tabulate(fine, bump);
        double prev = 0;
        bool monotone = true;
        std::ostringstream det;
        for (int lev = 0; lev < 3; ++lev) {
            const int block = 16 >> lev;  // 16, 8, 4 fine cells per block
            Field2D approx(fine);
            for (int i = 0; i < fine.nx; ++i)
                for (int j = 0; j < fine.ny; ++j) {
                    const int bi = (i / block) * block, bj = (j / block) * block;
                    double acc = 0;
                    for (int a = 0; a < block; ++a)
                        for (int b = 0; b < block; ++b)
                            acc += f.at(bi + a, bj + b);
                    approx.at(i, j) = acc / (block * block);
                }
            Field2D diff(fine);
            for (std::size_t c = 0; c < diff.values.size(); ++c)
                diff.values[c] = f.values[c] - approx.values[c];
            const double err = inner_product_H1(p, diff, diff);
            det << "level " << lev << ": " << err << "; ";
            if (lev > 0 && err >= prev) monotone = false;
            prev = err;
        }
        return make_result("", monotone ? 0.0 : 1.0, 0.5, det.str());
    });

    tasks.emplace_back("wiener.semimartingale.identity", [=]() {
        const FieldParams p{1, 1.5, 1.5, 1.0, 1.0};
        const Grid2D anchors{0.5, 0.5, 0.5, 0.5, 2, 2};
        const Grid2D ng = suggest_noise_grid(p, anchors);
        const SamplePath ma = sample_orderk_moving_average(p, anchors, ng, {44, 1});
        const SamplePath sm = sample_semimartingale(p, anchors, ng, {44, 1});
        double worst = 0;
        for (std::size_t i = 0; i < ma.values.size(); ++i)
            worst = std::max(worst, std::abs(ma.values[i] - sm.values[i]) /
                                        std::max(1e-12, std::abs(ma.values[i])));
        return make_result("", worst, cfg.tol_semimartingale_identity,
                           "moving-average field vs cumulative integral of the density field, "
                           "shared noise");
    });

    tasks.emplace_back("wiener.semimartingale.gate", [=]() {
        const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
        const Grid2D anchors{0.5, 0.5, 0.5, 0.5, 2, 2};
        const Grid2D ng = suggest_noise_grid(p, anchors);
        CheckResult r;
        try {
            sample_semimartingale(p, anchors, ng, {44, 2});
            r = make_result("", 1.0, 0.5, "sampler accepted H < 1: gate broken");
        } catch (const UnsupportedRangeError& e) {
            r = make_result("", 0.0, 0.5, std::string("refused as unsupported: ") + e.what());
            r.status = CheckResult::Status::warn;  // documented skip of the sampling itself
        }
        return r;
    });

    if (cfg.run_mc) {
        tasks.emplace_back("wiener.semimartingale.variance", [=]() {
            const FieldParams p{1, 1.5, 1.5, 1.0, 1.0};
            const Grid2D anchors{1.0, 1.0, 1.0, 1.0, 1, 1};
            const Grid2D ng = suggest_noise_grid(p, anchors);
            std::vector<int> ba, bb;
            const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
            const MovingAverageScheme scheme(p, q, ng);
            const double analytic = covariance(p, {{1, 1}, {1, 1}});
            std::vector<double> vals(cfg.mc_samples_semimartingale);
            for (int s = 0; s < cfg.mc_samples_semimartingale; ++s) {
                const NoiseGrid noise = make_noise_grid(ng, {45, static_cast<std::uint64_t>(s)});
                vals[s] = scheme.field_node_major(noise, ba, bb)[0];
            }
            const Moments mo = batched_moments(vals);
            std::ostringstream det;
            det << "emp " << mo.var << " vs analytic " << analytic;
            return make_result("", std::abs(mo.var - analytic) / analytic,
                               cfg.tol_semimartingale_var, det.str());
        });

        tasks.emplace_back("wiener.isometry", [=]() {
            const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
            const Grid2D anchors{0.25, 0.25, 0.25, 0.25, 8, 8};
            const Grid2D ng = suggest_noise_grid(p, anchors, 1e-7);
            std::vector<int> ba, bb;
            const TimeQuadrature q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
            const Grid2D nodeg{q.da / 2, q.db / 2, q.da, q.db, q.nqa, q.nqb};
            std::vector<Field2D> fs;
            fs.push_back(tabulate(nodeg, [](double t, double s) {
                return std::exp(-8.0 * ((t - 1) * (t - 1) + (s - 1) * (s - 1)));
            }));
            fs.push_back(tabulate(nodeg, [](double t, double s) {
                return std::exp(-6.0 * ((t - 0.7) * (t - 0.7) + (s - 1.3) * (s - 1.3))) * t;
            }));
            fs.push_back(tabulate(nodeg, [](double t, double s) {
                return std::exp(-10.0 * ((t - 1.4) * (t - 1.4) + (s - 0.6) * (s - 0.6))) *
                       std::sin(3 * s);
            }));
            // discretization budget: H1 drift between the node lattice and
            // its dyadic refinement
            double budget = 0.0;
            {
                const Grid2D nodeg2{q.da / 4, q.db / 4, q.da / 2, q.db / 2, 2 * q.nqa, 2 * q.nqb};
                const std::vector<std::function<double(double, double)>> defs{
                    [](double t, double s) {
                        return std::exp(-8.0 * ((t - 1) * (t - 1) + (s - 1) * (s - 1)));
                    },
                    [](double t, double s) {
                        return std::exp(-6.0 * ((t - 0.7) * (t - 0.7) + (s - 1.3) * (s - 1.3))) * t;
                    },
                    [](double t, double s) {
                        return std::exp(-10.0 * ((t - 1.4) * (t - 1.4) + (s - 0.6) * (s - 0.6))) *
                               std::sin(3 * s);
                    }};
                for (std::size_t i = 0; i < fs.size(); ++i) {
                    const Field2D finef = tabulate(nodeg2, defs[i]);
                    const double a = inner_product_H1(p, fs[i], fs[i]);
                    const double b = inner_product_H1(p, finef, finef);
                    budget = std::max(budget, std::abs(a - b) / std::max(1.0, std::abs(b)));
                }
            }
            const IsometryReport rep =
                isometry_report(p, fs, ng, cfg.mc_samples, {46, 0}, budget);
            std::ostringstream det;
            det << "3 smooth bumps, N=" << cfg.mc_samples << ", discretization budget "
                << budget << "; " << rep.rows.size() << " rows";
            return make_result("", rep.any_flagged() ? 1.0 : 0.0, 0.5, det.str());
        });
    }

    return run_tasks(std::move(tasks), cfg.threads);
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (r.status == CheckResult::Status::fail) return false;
    return true;
}

std::string report_to_text(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    os.precision(6);
    for (const auto& r : results) {
        const char* tag = r.status == CheckResult::Status::pass   ? "PASS"
                          : r.status == CheckResult::Status::warn ? "WARN"
                                                                  : "FAIL";
        os << '[' << tag << "] " << r.name << ": stat=" << r.statistic << " tol=" << r.tolerance;
        if (!r.details.empty()) os << " -- " << r.details;
        os << '\n';
    }
    return os.str();
}

std::string report_to_json(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    os.precision(15);
    os << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const char* tag = r.status == CheckResult::Status::pass   ? "pass"
                          : r.status == CheckResult::Status::warn ? "warn"
                                                                  : "fail";
        std::string esc;
        for (char c : r.details) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        os << "  {\"name\": \"" << r.name << "\", \"status\": \"" << tag
           << "\", \"statistic\": " << r.statistic << ", \"tolerance\": " << r.tolerance
           << ", \"details\": \"" << esc << "\"}" << (i + 1 < results.size() ? ",\n" : "\n");
    }
    os << "]\n";
    return os.str();
}

}
