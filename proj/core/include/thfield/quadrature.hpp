#pragma once

#include <cmath>
#include <functional>

namespace thfield::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_intervals = 4000;
    // subdivide at least this often before trusting the error estimate;
    // guards against false convergence on localized integrands
    int min_intervals = 10;
};

struct Result {
    double value = 0.0;
    double error = 0.0;   // accumulated error estimate
    bool converged = true;
};

/// Adaptive Gauss-Kronrod 7/15 on [a, b].
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     const Options& opts = {});

/// Integral over [a, b] of (x-a)^sigma * s(x) with sigma > -1 and s smooth.
/// Substitutes x = a + w^(1/(1+sigma)), under which the integrand becomes
/// s(a + w^(1/(1+sigma))) / (1+sigma) exactly (no singular factor left).
Result power_endpoint_left(const std::function<double(double)>& s, double a, double b,
                           double sigma, const Options& opts = {});

}
