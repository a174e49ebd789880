#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "thfield/covariance.hpp"
#include "thfield/errors.hpp"
#include "thfield/tfcalc.hpp"
#include "thfield/wiener.hpp"

using namespace thfield;

namespace {

struct Setup {
    FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
    Grid2D anchors{0.25, 0.25, 0.25, 0.25, 8, 8};
    Grid2D ng;
    TimeQuadrature q;
    std::vector<int> ba, bb;
    Grid2D nodeg;

    Setup() {
        ng = suggest_noise_grid(p, anchors);
        q = quadrature_for_anchors(p, anchors, ng, &ba, &bb);
        nodeg = Grid2D{q.da / 2, q.db / 2, q.da, q.db, q.nqa, q.nqb};
    }

    SamplePath path_from(const NoiseGrid& noise) const {
        const MovingAverageScheme scheme(p, q, ng);
        const auto z = scheme.field_cell_major(noise, ba, bb);
        SamplePath path;
        path.params = p;
        path.anchors = anchors;
        path.method = SampleMethod::moving_average;
        path.values.assign(anchors.size(), 0.0);
        for (int i = 0; i < anchors.nx; ++i)
            for (int j = 0; j < anchors.ny; ++j)
                path.values[anchors.index(i, j)] = z[i * anchors.ny + j];
        return path;
    }
};

}  // namespace

TEST_SUITE("wiener") {

TEST_CASE("elementary integral basics") {
    Setup su;
    const NoiseGrid noise = make_noise_grid(su.ng, {3, 14});
    const SamplePath path = su.path_from(noise);

    // single unit rectangle anchored at the origin telescopes to Z(t,s)
    const ElementaryFunction unit{{{1.0, 0.0, 1.0, 0.0, 1.0}}};
    CHECK(integrate_elementary(su.p, unit, path) ==
          doctest::Approx(path.value_at(1.0, 1.0)).epsilon(1e-14));

    const ElementaryFunction empty{};
    CHECK(integrate_elementary(su.p, empty, path) == 0.0);

    const ElementaryFunction two{{{2.0, 0.0, 1.0, 0.0, 1.0}, {-1.5, 0.25, 0.75, 0.5, 1.25}}};
    const ElementaryFunction second{{{-1.5, 0.25, 0.75, 0.5, 1.25}}};
    CHECK(integrate_elementary(su.p, two, path) ==
          doctest::Approx(2.0 * integrate_elementary(su.p, unit, path) / 1.0 * 1.0 +
                          integrate_elementary(su.p, second, path))
              .epsilon(1e-13));

    const ElementaryFunction off{{{1.0, 0.0, 0.9, 0.0, 1.0}}};
    CHECK_THROWS_AS(integrate_elementary(su.p, off, path), std::invalid_argument);
    const ElementaryFunction degenerate{{{1.0, 1.0, 1.0, 0.0, 1.0}}};
    CHECK_THROWS_AS(integrate_elementary(su.p, degenerate, path), std::invalid_argument);
}

TEST_CASE("white-noise route reorders the sampler's finite sum") {
    Setup su;
    const NoiseGrid noise = make_noise_grid(su.ng, {3, 14});
    const SamplePath path = su.path_from(noise);

    const Field2D ind = tabulate(su.nodeg, [](double t, double s) {
        return (t <= 1.0 && s <= 1.0) ? 1.0 : 0.0;
    });
    const double iwn = integrate_via_white_noise(su.p, ind, noise);
    CHECK(iwn == doctest::Approx(path.value_at(1.0, 1.0)).epsilon(1e-10));

    const ElementaryFunction ef{{{2.0, 0.0, 1.0, 0.0, 1.0}, {-1.5, 0.25, 0.75, 0.5, 1.25}}};
    const Field2D fel = tabulate(su.nodeg, [&](double t, double s) { return ef(t, s); });
    const double ie = integrate_elementary(su.p, ef, path);
    const double iw = integrate_via_white_noise(su.p, fel, noise);
    CHECK(std::abs(ie - iw) <= 1e-8 * std::abs(ie));

    CHECK(integrate_via_white_noise(su.p, Field2D(su.nodeg), noise) == 0.0);

    // fields not on the midpoint lattice are refused
    Grid2D wrong = su.nodeg;
    wrong.x0 = 0.0;
    CHECK_THROWS_AS(integrate_via_white_noise(su.p, Field2D(wrong), noise), GridMismatchError);
}

TEST_CASE("isometry report: empty and zero inputs") {
    Setup su;
    const IsometryReport empty = isometry_report(su.p, {}, su.ng, 10, {9, 9});
    CHECK(empty.rows.empty());
    CHECK(!empty.any_flagged());

    const std::vector<Field2D> zero{Field2D(su.nodeg)};
    const IsometryReport rep = isometry_report(su.p, zero, su.ng, 50, {9, 9});
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].h1 == 0.0);
    CHECK(rep.rows[0].h2 == 0.0);
    CHECK(rep.rows[0].emp_cov == 0.0);
    CHECK(!rep.rows[0].flagged);
}

TEST_CASE("distant rectangles decorrelate under tempering") {
    Setup su;
    const Field2D near = tabulate(su.nodeg, [](double t, double s) {
        return (t <= 0.5 && s <= 0.5) ? 1.0 : 0.0;
    });
    const Field2D far = tabulate(su.nodeg, [](double t, double s) {
        return (t > 1.5 && s > 1.5) ? 1.0 : 0.0;
    });
    const double cross = inner_product_H1(su.p, near, far);
    const double v1 = inner_product_H1(su.p, near, near);
    const double v2 = inner_product_H1(su.p, far, far);
    CHECK(std::abs(cross) < 0.05 * std::sqrt(v1 * v2));
}

TEST_CASE("isometry holds on a small Monte Carlo run") {
    Setup su;
    const Field2D bump = tabulate(su.nodeg, [](double t, double s) {
        return std::exp(-8.0 * ((t - 1) * (t - 1) + (s - 1) * (s - 1)));
    });
    const IsometryReport rep = isometry_report(su.p, {bump}, su.ng, 2000, {99, 0}, 0.02);
    REQUIRE(rep.rows.size() == 1);
    CHECK(!rep.rows[0].flagged);
    CHECK(rep.rows[0].h1 == doctest::Approx(rep.rows[0].h2).epsilon(1e-4));
    const std::string csv = rep.to_csv();
    CHECK(csv.find("i,j,h1,h2,emp_cov,se,flagged") == 0);
    CHECK(rep.to_json().find("\"rows\"") != std::string::npos);
}

TEST_CASE("piecewise-constant refinement approaches a smooth field in H1") {
    const FieldParams p{1, 0.7, 0.8, 1.0, 1.0};
    const Grid2D fine{1.0 / 64, 1.0 / 64, 1.0 / 32, 1.0 / 32, 64, 64};
    const Field2D f = tabulate(fine, [](double t, double s) {
        return std::exp(-8.0 * ((t - 1) * (t - 1) + (s - 1) * (s - 1)));
    });
    double prev = 1e300;
    for (int block : {16, 8, 4}) {
        Field2D approx(fine);
        for (int i = 0; i < fine.nx; ++i)
            for (int j = 0; j < fine.ny; ++j) {
                const int bi = (i / block) * block, bj = (j / block) * block;
                double acc = 0;
                for (int a = 0; a < block; ++a)
                    for (int b = 0; b < block; ++b) acc += f.at(bi + a, bj + b);
                approx.at(i, j) = acc / (block * block);
            }
        Field2D diff(fine);
        for (std::size_t c = 0; c < diff.values.size(); ++c)
            diff.values[c] = f.values[c] - approx.values[c];
        const double err = inner_product_H1(p, diff, diff);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("order restriction") {
    Setup su;
    const FieldParams p2{2, 0.75, 0.75, 1.0, 1.0};
    const NoiseGrid noise = make_noise_grid(su.ng, {1, 1});
    CHECK_THROWS_AS(integrate_via_white_noise(p2, Field2D(su.nodeg), noise),
                    UnsupportedRangeError);
}

}  // TEST_SUITE
