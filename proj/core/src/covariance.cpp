#include "thfield/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thfield/quadrature.hpp"
#include "thfield/specfun.hpp"

namespace thfield {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950;

// Overlap weight of the rectangle pair [0,T1] x [0,T2] at distance r:
// the 1-D measure of {(a,a') in the box : |a-a'| = r}. Piecewise linear
// with kinks at |T1-T2| and min(T1,T2).
double overlap_weight(double T1, double T2, double r) {
    const double lo = std::min(T1, T2);
    const double hi = std::max(T1, T2);
    return std::max(0.0, std::min(lo, hi - r)) + std::max(0.0, lo - r);
}

struct AxisIntegrand {
    double nu;       // (H-1)/k, the K order
    double lambda;
    int k;

    double g(double r) const {
        if (r <= 0.0) return 0.0;
        const double kv = bessel_k(nu, lambda * r);
        if (kv == 0.0) return 0.0;
        return std::pow(std::pow(r, nu) * kv, static_cast<double>(k));
    }
    // g with the r^(2H-2) power divided out (bounded near 0; H < 1 case)
    double g_smooth(double r) const {
        if (r <= 0.0) {
            const double anu = std::abs(nu);
            return std::pow(std::pow(2.0, anu - 1.0) * gamma_fn(anu) * std::pow(lambda, -anu),
                            static_cast<double>(k));
        }
        const double kv = bessel_k(nu, lambda * r);
        return std::pow(std::pow(r, -nu) * kv, static_cast<double>(k));
    }
};

}  // namespace

double covariance_axis_factor(double H, double lambda, int k, double T1, double T2) {
    if (T1 <= 0.0 || T2 <= 0.0) return 0.0;
    const double nu = (H - 1.0) / k;
    const double coeff = std::pow(gamma_fn(0.5 - (1.0 - H) / k) /
                                      (std::sqrt(kPi) * std::pow(2.0 * lambda, nu)),
                                  static_cast<double>(k));
    const AxisIntegrand ax{nu, lambda, k};

    const double lo = std::min(T1, T2);
    const double hi = std::max(T1, T2);
    const double rmax = std::min(hi, 42.0 / (k * lambda));  // beyond, the integrand has underflowed

    // split where the overlap weight kinks and where the substitution ends
    const double rsplit = std::min(1.0 / lambda, lo) / 2.0;
    std::vector<double> cuts{0.0, rmax};
    for (double c : {rsplit, hi - lo, lo})
        if (c > 0.0 && c < rmax) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const quad::Options opts{1e-12, 1e-9, 4000};
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (i == 0 && H < 1.0) {
            // integrand ~ r^(2H-2) near 0
            auto s = [&](double r) { return overlap_weight(T1, T2, r) * ax.g_smooth(r); };
            acc += quad::power_endpoint_left(s, 0.0, b, 2.0 * H - 2.0, opts).value;
        } else {
            auto f = [&](double r) { return overlap_weight(T1, T2, r) * ax.g(r); };
            acc += quad::gauss_kronrod(f, a, b, opts).value;
        }
    }
    return coeff * acc;
}

double covariance(const FieldParams& params, const CovQuery& query) {
    params.validate();
    query.validate();
    const double f1 = covariance_axis_factor(params.H1, params.lambda1, params.k,
                                             query.p.first, query.q.first);
    if (f1 == 0.0) return 0.0;
    const double f2 = covariance_axis_factor(params.H2, params.lambda2, params.k,
                                             query.p.second, query.q.second);
    return gamma_fn(params.k + 1.0) * f1 * f2;
}

namespace {

// axis factors repeat heavily over anchor grids; memoize per call
class AxisCache {
public:
    AxisCache(double H, double lambda, int k) : H_(H), lambda_(lambda), k_(k) {}
    double operator()(double T1, double T2) {
        if (T1 <= 0.0 || T2 <= 0.0) return 0.0;
        const auto key = std::minmax(T1, T2);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double v = covariance_axis_factor(H_, lambda_, k_, T1, T2);
        cache_.emplace(key, v);
        return v;
    }

private:
    double H_, lambda_;
    int k_;
    std::map<std::pair<double, double>, double> cache_;
};

}  // namespace

Eigen::MatrixXd covariance_matrix(const FieldParams& params,
                                  const std::vector<std::pair<double, double>>& anchors) {
    params.validate();
    const int n = static_cast<int>(anchors.size());
    for (int i = 0; i < n; ++i) {
        if (anchors[i].first < 0.0 || anchors[i].second < 0.0)
            throw std::invalid_argument("covariance_matrix: anchors must be nonnegative");
        for (int j = i + 1; j < n; ++j)
            if (anchors[i] == anchors[j])
                throw std::invalid_argument("covariance_matrix: duplicate anchors");
    }
    AxisCache ax1(params.H1, params.lambda1, params.k);
    AxisCache ax2(params.H2, params.lambda2, params.k);
    const double kfact = gamma_fn(params.k + 1.0);
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = kfact * ax1(anchors[i].first, anchors[j].first) *
                             ax2(anchors[i].second, anchors[j].second);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

double increment_variance(const FieldParams& params, std::pair<double, double> base,
                          std::pair<double, double> offsets) {
    params.validate();
    const auto [t, s] = base;
    const auto [z1, z2] = offsets;
    if (!(z1 > 0.0) || !(z2 > 0.0))
        throw std::invalid_argument("increment_variance: offsets must be positive");
    const std::pair<double, double> pt[4] = {
        {t + z1, s + z2}, {t, s + z2}, {t + z1, s}, {t, s}};
    const double sign[4] = {+1.0, -1.0, -1.0, +1.0};
    AxisCache ax1(params.H1, params.lambda1, params.k);
    AxisCache ax2(params.H2, params.lambda2, params.k);
    const double kfact = gamma_fn(params.k + 1.0);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            const double cov = kfact * ax1(pt[i].first, pt[j].first) * ax2(pt[i].second, pt[j].second);
            acc += (i == j ? 1.0 : 2.0) * sign[i] * sign[j] * cov;
        }
    }
    return std::max(acc, 0.0);
}

double scaling_identity_residual(const FieldParams& params, std::pair<double, double> h,
                                 const CovQuery& query) {
    params.validate();
    query.validate();
    const auto [h1, h2] = h;
    if (!(h1 > 0.0) || !(h2 > 0.0))
        throw std::invalid_argument("scaling_identity_residual: scale factors must be positive");
    if (h1 == 1.0 && h2 == 1.0) return 0.0;

    const CovQuery scaled{{h1 * query.p.first, h2 * query.p.second},
                          {h1 * query.q.first, h2 * query.q.second}};
    const double lhs = covariance(params, scaled);
    FieldParams rescaled = params;
    rescaled.lambda1 *= h1;
    rescaled.lambda2 *= h2;
    const double rhs = std::pow(h1, 2.0 * params.H1) * std::pow(h2, 2.0 * params.H2) *
                       covariance(rescaled, query);
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

}
