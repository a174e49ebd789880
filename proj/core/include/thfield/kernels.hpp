#pragma once

#include <complex>
#include <span>
#include <utility>

#include "thfield/params.hpp"

namespace thfield {

/// The 1-D tempered power kernel u_+^(g-1) e^(-lambda u). All integrals
/// against it reduce to lower incomplete gamma differences, which is how
/// cells of singular kernels are tabulated (never pointwise).
struct TemperedPowerKernel {
    double g;       // power parameter, > 0; kernel exponent is g - 1
    double lambda;  // tempering rate, > 0

    TemperedPowerKernel(double g_, double lambda_) : g(g_), lambda(lambda_) {
        if (!(g > 0.0) || !(lambda > 0.0))
            throw std::invalid_argument("TemperedPowerKernel: g and lambda must be positive");
    }

    double value(double u) const;                    // pointwise, u != 0 when g < 1
    double mass(double z) const;                     // int_0^z
    double total_mass() const;                       // Gamma(g) lambda^-g
    double cell_integral(double a, double b) const;  // int_a^b, clipped at 0
    double cell_average(double a, double b) const;
    double moment(int j, double a, double b) const;  // int_a^b u^j * kernel(u) du
    double tail_cutoff(double tail_tol) const;
};

/// Pointwise value of the k=1 moving-average kernel's 1-D time integral
///   X_t(x) = int_0^t (a-x)_+^(g-1) e^(-lambda (a-x)_+) da
/// and its exact average over a cell [xl, xr] (the x-tabulation of the
/// kernel needs averages: X_t has unbounded derivative at x = t).
double tempered_ma_factor(double g, double lambda, double t, double x);
double tempered_ma_factor_cell_avg(double g, double lambda, double t, double xl, double xr);

/// Moving-average kernel h_(s,t)(x, y) of the order-one field: the product
/// of two 1-D tempered incomplete-gamma integrals. k = 1 only.
double moving_average_kernel(const FieldParams& p, std::pair<double, double> anchor,
                             std::pair<double, double> point);

/// Inner time-integrand of the order-k kernel at fixed (a, b):
/// prod_j (a-x_j)_+^(c1-1) e^(-l1 (a-x_j)_+) (b-y_j)_+^(c2-1) e^(-l2 (b-y_j)_+).
/// Evaluating exactly on a singular point throws SingularityError; callers
/// tabulating it must use cell averages.
double kernel_time_integrand(const FieldParams& p, std::pair<double, double> ab,
                             std::span<const std::pair<double, double>> points);

/// Squared L2 norm of h_(s,t) over (R^2)^k, via the Bessel-K reduction of
/// the kernel inner product; one nested 1-D quadrature per axis.
double kernel_l2_norm_sq(const FieldParams& p, double t, double s);

/// Complex multiplier (lambda1 + sign*i*xi)^a1 (lambda2 + sign*i*omega)^a2 on
/// the principal branch (the base never crosses the cut since lambda > 0).
/// Exponents are stored as applied: integral symbols carry -alpha,
/// derivative symbols +alpha.
struct SpectralSymbol {
    double alpha1 = -0.5;
    double alpha2 = -0.5;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    int sign = +1;  // +1: (lambda + i xi), -1: (lambda - i xi)

    std::complex<double> eval(double xi, double omega) const;
    double modulus(double xi, double omega) const;  // (l1^2+xi^2)^(a1/2) (l2^2+w^2)^(a2/2)
};

/// C_(H1,H2,k) = [Gamma(1/2-(1-H1)/k) Gamma(1/2-(1-H2)/k) / (2 pi)]^k.
double spectral_constant(const FieldParams& p);

}
