#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "thfield/covariance.hpp"
#include "thfield/kernels.hpp"
#include "thfield/specfun.hpp"

using namespace thfield;

TEST_SUITE("covariance") {

TEST_CASE("degenerate anchors give zero") {
    const FieldParams p{1, 0.7, 0.9, 1.0, 2.0};
    CHECK(covariance(p, {{0.0, 1.0}, {1.0, 1.0}}) == 0.0);
    CHECK(covariance(p, {{1.0, 0.0}, {1.0, 1.0}}) == 0.0);
    CHECK(covariance(p, {{1.0, 1.0}, {0.0, 1.0}}) == 0.0);
    CHECK(covariance(p, {{0.5, 0.5}, {1.0, 1.0}}) > 0.0);
}

TEST_CASE("symmetry in the two anchors") {
    const FieldParams p{2, 0.75, 0.6, 1.0, 0.5};
    const double a = covariance(p, {{1.0, 0.5}, {0.3, 2.0}});
    const double b = covariance(p, {{0.3, 2.0}, {1.0, 0.5}});
    CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("frozen value with the two independent oracles nearby") {
    const FieldParams p{1, 0.7, 0.9, 1.0, 2.0};
    const double frozen = 5.040843255240;
    CHECK(covariance(p, {{1.0, 0.5}, {0.3, 2.0}}) == doctest::Approx(frozen).epsilon(1e-9));
}

TEST_CASE("axis factor against direct 2-D quadrature") {
    // the overlap-weight reduction unit-checked against the iterated
    // two-variable integral it replaces
    const double H = 0.75, lam = 1.3;
    const int k = 2;
    const double T1 = 0.8, T2 = 1.7;
    const double impl = covariance_axis_factor(H, lam, k, T1, T2);

    const double nu = (H - 1.0) / k;
    const double coeff = std::pow(
        gamma_fn(0.5 - (1.0 - H) / k) / (std::sqrt(3.14159265358979323846) * std::pow(2 * lam, nu)),
        static_cast<double>(k));
    auto sm = [&](double r) {
        if (r <= 0.0) {
            const double anu = std::abs(nu);
            return std::pow(std::pow(2.0, anu - 1.0) * gamma_fn(anu) * std::pow(lam, -anu),
                            static_cast<double>(k));
        }
        return std::pow(std::pow(r, -nu) * bessel_k(nu, lam * r), static_cast<double>(k));
    };
    auto inner = [&](double a) {
        double acc = 0.0;
        if (a > 0)
            acc += oracles::integrate_power_left(sm, 0.0, a, 2 * H - 2, 1e-11);
        if (T2 - a > 0)
            acc += oracles::integrate_power_left(sm, 0.0, T2 - a, 2 * H - 2, 1e-11);
        return acc;
    };
    const double oracle = coeff * oracles::integrate(inner, 0.0, T1, 1e-9);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-7));
}

TEST_CASE("covariance matrix: shape, zeros, PSD, duplicates") {
    const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};

    const Eigen::MatrixXd single = covariance_matrix(p, {{1.0, 1.0}});
    CHECK(single.rows() == 1);
    CHECK(single(0, 0) == doctest::Approx(covariance(p, {{1, 1}, {1, 1}})));

    const Eigen::MatrixXd withzero = covariance_matrix(p, {{1.0, 1.0}, {0.0, 1.0}});
    CHECK(withzero(1, 1) == 0.0);
    CHECK(withzero(0, 1) == 0.0);

    std::vector<std::pair<double, double>> anchors;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) anchors.emplace_back(0.5 * i, 0.5 * j);
    const Eigen::MatrixXd m = covariance_matrix(p, anchors);
    CHECK((m - m.transpose()).norm() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * m.trace());

    CHECK_THROWS_AS(covariance_matrix(p, {{1.0, 1.0}, {1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("increment variance: positivity, continuity, stationarity") {
    const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
    const double big = increment_variance(p, {0.5, 0.5}, {1.0, 1.0});
    const double small = increment_variance(p, {0.5, 0.5}, {1e-3, 1.0});
    CHECK(big > 0.0);
    CHECK(small < 1e-2 * big);

    const double v0 = increment_variance(p, {0, 0}, {0.5, 0.8});
    const double v1 = increment_variance(p, {2.3, 1.7}, {0.5, 0.8});
    CHECK(std::abs(v0 - v1) <= 1e-6 * v0);
    // the increment over [0,z1]x[0,z2] anchored at the origin is Z(z1,z2)
    CHECK(v0 == doctest::Approx(covariance(p, {{0.5, 0.8}, {0.5, 0.8}})).epsilon(1e-9));

    const FieldParams pk{2, 0.75, 0.6, 1.0, 0.5};
    const double w0 = increment_variance(pk, {0, 0}, {0.4, 0.9});
    const double w1 = increment_variance(pk, {1.7, 0.3}, {0.4, 0.9});
    CHECK(std::abs(w0 - w1) <= 1e-6 * w0);
    CHECK_THROWS_AS(increment_variance(p, {0, 0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("increment-variance slope recovers the continuity exponent") {
    for (double H : {0.7, 1.5}) {
        const FieldParams p{1, H, 0.8, 1.0, 1.0};
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int j = 0; j <= 6; ++j) {
            const double z = std::pow(2.0, -j);
            const double v = increment_variance(p, {0.9, 1.1}, {z, 1.0});
            const double X = std::log(z), Y = std::log(v);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
            ++n;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(std::abs(slope - std::min(2 * H, 2.0)) <= 0.1);
    }
}

TEST_CASE("scaling identity residuals") {
    const FieldParams p{1, 0.7, 0.9, 1.0, 2.0};
    CHECK(scaling_identity_residual(p, {1.0, 1.0}, {{1, 1}, {0.5, 2}}) == 0.0);
    CHECK(scaling_identity_residual(p, {2.0, 0.5}, {{1, 1}, {1, 1}}) <= 1e-6);
    const FieldParams p2{2, 0.8, 0.8, 1.0, 1.0};
    CHECK(scaling_identity_residual(p2, {3.0, 3.0}, {{1, 1}, {0.5, 2}}) <= 1e-6);
    CHECK_THROWS_AS(scaling_identity_residual(p, {0.0, 1.0}, {{1, 1}, {1, 1}}),
                    std::invalid_argument);
}

TEST_CASE("negative coordinates are rejected") {
    const FieldParams p{1, 0.7, 0.7, 1.0, 1.0};
    CHECK_THROWS_AS(covariance(p, {{-1.0, 1.0}, {1.0, 1.0}}), std::invalid_argument);
}

}  // TEST_SUITE
