#pragma once

#include "thfield/grid.hpp"
#include "thfield/kernels.hpp"
#include "thfield/params.hpp"

namespace thfield {

/// Causality side of the tempered fractional operators: Plus convolves
/// against the past (kernel on u > 0 applied at t - u), Minus against the
/// future.
enum class Side { plus, minus };

/// I^(alpha,lambda)_side f by real-space product-integration convolution:
/// the kernel's cell moments are exact incomplete-gamma differences and f
/// is locally interpolated to degree 5, so the discrete operator matches
/// the continuum symbol to O(h^6) on smooth fields. Zero extension
/// outside the grid; output on f's grid.
Field2D frac_integral(const FracOrder& order, Side side, const Field2D& f);

/// Same operator through the Fourier multiplier (lambda +- i xi)^(-alpha):
/// pad, transform, multiply, transform back. Throws AliasingError when the
/// imaginary residue exceeds 1e-9 of the real norm.
Field2D frac_integral_fourier(const FracOrder& order, Side side, const Field2D& f);

/// D^(alpha,lambda)_side f via the multiplier with positive exponents.
Field2D frac_derivative_fourier(const FracOrder& order, Side side, const Field2D& f);

/// D^(alpha,lambda)_side f in real space (alpha_i in (0,1)): the tempered
/// Marchaud form applied per axis and composed, so the increment
/// differences cancel every kernel singularity, including the mixed one.
Field2D frac_derivative_pointwise(const FracOrder& order, Side side, const Field2D& f);

/// Weighted spectral norm with weight (l1^2+w1^2)^a1 (l2^2+w2^2)^a2;
/// alpha = (0,0) reduces to the plain L2 norm.
double sobolev_norm(const SobolevParams& params, const Field2D& f);

/// Inner products of the order-one Wiener-integration space: the
/// time-domain form <F,G>_L2 with F = Gamma(H1-1/2) Gamma(H2-1/2) I^beta_- f,
/// and the equivalent weighted-spectral form. They agree by Plancherel.
double inner_product_H1(const FieldParams& params, const Field2D& f, const Field2D& g);
double inner_product_H2(const FieldParams& params, const Field2D& f, const Field2D& g);

namespace detail {
/// Lag weights of the 1-D product-integration convolution for the kernel
/// u^(g-1) e^(-lambda u) / Gamma(g) on spacing h with nlag cells.
/// weights[q + 2] multiplies f(x - q h) for q = -2 .. nlag + 2.
std::vector<double> integral_conv_weights(double g, double lambda, double h, int nlag);

/// Same for the Marchaud difference kernel (alpha/Gamma(1-alpha))
/// u^(-alpha-1) e^(-lambda u): returns weights V with the convention
/// (A f)(x) = (sum V) f(x) - sum_q V[q+2] f(x - q h).
std::vector<double> marchaud_conv_weights(double alpha, double lambda, double h, int nlag);
}

}
