#pragma once

#include <string>
#include <vector>

#include "thfield/simulate.hpp"

namespace thfield {

/// Finite linear combination of half-open rectangle indicators
/// a * 1_((t_lo, t_hi] x (s_lo, s_hi]).
struct ElementaryFunction {
    struct Term {
        double coeff;
        double t_lo, t_hi;
        double s_lo, s_hi;
    };
    std::vector<Term> terms;

    void validate() const {
        for (const auto& t : terms)
            if (!(t.t_lo < t.t_hi) || !(t.s_lo < t.s_hi))
                throw std::invalid_argument("ElementaryFunction: degenerate rectangle");
    }

    /// Pointwise value (piecewise constant).
    double operator()(double t, double s) const {
        double acc = 0.0;
        for (const auto& tm : terms)
            if (t > tm.t_lo && t <= tm.t_hi && s > tm.s_lo && s <= tm.s_hi) acc += tm.coeff;
        return acc;
    }
};

/// Wiener integral of an elementary function against a realized path:
/// the signed sum of rectangular field increments. Every rectangle corner
/// must be an anchor of the path (coordinates on the axes count as 0).
double integrate_elementary(const FieldParams& params, const ElementaryFunction& f,
                            const SamplePath& path);

/// Wiener integral through the white-noise route: pair the discretized
/// Gamma Gamma I^beta_- f with the Brownian increments. f is tabulated on
/// the midpoint lattice of the time quadrature (grid origin at half a
/// step), and the scheme shares the discretization of the moving-average
/// sampler, so for piecewise-constant f both routes reorder one finite sum.
double integrate_via_white_noise(const FieldParams& params, const Field2D& f,
                                 const NoiseGrid& noise);

/// Monte Carlo isometry table: analytic inner products of both forms
/// against the empirical covariance of the white-noise integrals.
struct IsometryReport {
    struct Row {
        int i, j;
        double h1;        // <f_i, f_j> time-domain form
        double h2;        // spectral form
        double emp_cov;   // empirical Cov(I(f_i), I(f_j))
        double se;        // standard error of emp_cov
        bool flagged;     // disagreement beyond the allowed band
    };
    std::vector<Row> rows;
    int samples = 0;
    double band_se = 4.0;
    double discretization_budget = 0.0;

    bool any_flagged() const {
        for (const auto& r : rows)
            if (r.flagged) return true;
        return false;
    }
    std::string to_csv() const;
    std::string to_json() const;
};

IsometryReport isometry_report(const FieldParams& params, const std::vector<Field2D>& fs,
                               const Grid2D& noise_grid, int samples, const SeedSpec& seed,
                               double discretization_budget = 0.0);

}
