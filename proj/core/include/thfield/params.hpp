#pragma once

#include <cmath>
#include <stdexcept>

#include "thfield/errors.hpp"

namespace thfield {

/// Full parameter vector of the two-parameter tempered Hermite field:
/// order k, Hurst pair (H1, H2) with H_i > 1/2, tempering pair
/// (lambda1, lambda2) with lambda_i > 0.
struct FieldParams {
    int k = 1;
    double H1 = 0.75;
    double H2 = 0.75;
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    void validate() const {
        if (k < 1) throw std::invalid_argument("FieldParams: k must be >= 1");
        if (!(H1 > 0.5) || !(H2 > 0.5))
            throw std::invalid_argument("FieldParams: Hurst exponents must exceed 1/2");
        if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
            throw std::invalid_argument("FieldParams: tempering rates must be positive");
        if (!std::isfinite(H1) || !std::isfinite(H2) ||
            !std::isfinite(lambda1) || !std::isfinite(lambda2))
            throw std::invalid_argument("FieldParams: non-finite parameter");
    }

    /// Kernel power exponent per factor and axis: the kernel carries
    /// u_+^(-(1/2 + (1-H)/k)) = u_+^(c-1) with c = 1/2 + (H-1)/k.
    double kernel_power1() const { return 0.5 + (H1 - 1.0) / k; }
    double kernel_power2() const { return 0.5 + (H2 - 1.0) / k; }
};

/// Order/tempering bundle of the two-parameter tempered fractional
/// operators I^{alpha,lambda} and D^{alpha,lambda}.
struct FracOrder {
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    void validate() const {
        if (!(alpha1 > 0.0) || !(alpha2 > 0.0))
            throw std::invalid_argument("FracOrder: orders must be positive");
        if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
            throw std::invalid_argument("FracOrder: tempering rates must be positive");
    }

    void validate_derivative_range() const {
        validate();
        if (!(alpha1 < 1.0) || !(alpha2 < 1.0))
            throw std::invalid_argument("FracOrder: pointwise derivative needs alpha < 1");
    }
};

/// The fractional-order link for the order-one field: beta = (H1-1/2, H2-1/2)
/// with the field's tempering pair.
inline FracOrder beta_of(const FieldParams& p) {
    p.validate();
    if (p.k != 1)
        throw UnsupportedRangeError("beta_of: the fractional-calculus link holds for order k=1 only");
    return FracOrder{p.H1 - 0.5, p.H2 - 0.5, p.lambda1, p.lambda2};
}

/// Exponents and reference tempering of the weighted spectral norm
/// (lambda1^2+w1^2)^a1 (lambda2^2+w2^2)^a2.
struct SobolevParams {
    FracOrder order;

    void validate() const {
        if (order.alpha1 < 0.0 || order.alpha2 < 0.0)
            throw std::invalid_argument("SobolevParams: exponents must be >= 0");
        if (!(order.lambda1 > 0.0) || !(order.lambda2 > 0.0))
            throw std::invalid_argument("SobolevParams: tempering rates must be positive");
    }
};

}
