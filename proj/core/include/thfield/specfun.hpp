#pragma once

namespace thfield {

/// Euler gamma function for x > 0, relative error <= 1e-12.
double gamma_fn(double x);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

/// 1/Gamma(x) for any real x (entire; zero at nonpositive integers).
double recip_gamma(double x);

/// Lower incomplete gamma gamma(a, x) = int_0^x u^(a-1) e^(-u) du,
/// a > 0, x >= 0; relative error <= 1e-12.
double lower_incomplete_gamma(double a, double x);

/// Regularized P(a,x) = gamma(a,x)/Gamma(a) and Q(a,x) = 1 - P(a,x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Primitive of the lower incomplete gamma in its second argument:
/// int_0^z gamma(a, u) du = z gamma(a, z) - gamma(a+1, z).
double lower_incomplete_gamma_primitive(double a, double z);

/// Modified Bessel function of the second kind of real order, x > 0.
/// Symmetric in nu by construction; relative error <= 1e-10 for
/// |nu| <= 5 and x >= 1e-6. Underflows to exact 0 for large x.
double bessel_k(double nu, double x);
double bessel_k(double nu, double x, bool& underflowed);

/// exp(x) * K_nu(x); stays representable far beyond the underflow
/// threshold of the unscaled function.
double bessel_k_scaled(double nu, double x);

/// Smallest u such that the tail mass of u^(a-1) e^(-lambda u) beyond u
/// is below tail_tol of the total Gamma(a) lambda^(-a).
double tempered_power_tail_cutoff(double a, double lambda, double tail_tol);

}
