#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thfield/params.hpp"

namespace thfield {

/// Two space-time anchor points for covariance evaluation. The field is
/// pinned to zero on the axes, so coordinates are nonnegative.
struct CovQuery {
    std::pair<double, double> p;  // (t, s)
    std::pair<double, double> q;  // (u, v)

    void validate() const {
        if (p.first < 0.0 || p.second < 0.0 || q.first < 0.0 || q.second < 0.0)
            throw std::invalid_argument("CovQuery: coordinates must be nonnegative");
    }
};

/// E[Z(t,s) Z(u,v)] in closed form: per axis, the double time integral of
/// [|a-a'|^((H-1)/k) K_((H-1)/k)(lambda |a-a'|)]^k collapses against the
/// overlap weight of the rectangle pair, leaving one 1-D quadrature; the
/// k! of the multiple-integral isometry is included.
double covariance(const FieldParams& params, const CovQuery& query);

/// One axis of the covariance product (exposed for cross-checks):
/// coeff^k * int L_(T1,T2)(r) [r^((H-1)/k) K(lambda r)]^k dr.
double covariance_axis_factor(double H, double lambda, int k, double T1, double T2);

/// Gram matrix of covariance values over an anchor list. Anchors must be
/// distinct; entries with a zero coordinate give zero rows/columns.
Eigen::MatrixXd covariance_matrix(const FieldParams& params,
                                  const std::vector<std::pair<double, double>>& anchors);

/// Variance of the rectangular increment
/// Z(t+z1,s+z2) - Z(t,s+z2) - Z(t+z1,s) + Z(t,s), by the 4-point
/// covariance expansion (10 distinct covariance calls). Stationarity of
/// increments makes the result base-independent up to quadrature error.
double increment_variance(const FieldParams& params, std::pair<double, double> base,
                          std::pair<double, double> offsets);

/// |Cov_lambda((h1 t, h2 s), (h1 u, h2 v)) -
///  h1^(2H1) h2^(2H2) Cov_(h1 l1, h2 l2)((t,s),(u,v))| / max(1, |Cov|).
double scaling_identity_residual(const FieldParams& params, std::pair<double, double> h,
                                 const CovQuery& query);

}
