#pragma once

#include <string>
#include <vector>

#include "thfield/covariance.hpp"
#include "thfield/grid.hpp"
#include "thfield/params.hpp"
#include "thfield/rng.hpp"

namespace thfield {

enum class SampleMethod { cholesky, spectral, moving_average, semimartingale };

const char* to_string(SampleMethod m);
SampleMethod sample_method_from_string(const std::string& s);

/// A realization of the field on an anchor lattice; anchors with a zero
/// coordinate hold exact zeros.
struct SamplePath {
    FieldParams params;
    Grid2D anchors;
    std::vector<double> values;
    SampleMethod method = SampleMethod::cholesky;

    double at(int i, int j) const { return values[anchors.index(i, j)]; }

    /// Field value at an anchor coordinate pair; coordinates on the axes
    /// return 0 without needing to be grid nodes.
    double value_at(double t, double s) const;
};

/// Midpoint lattice over [0, Ta] x [0, Tb] used to discretize the outer
/// time integral of the moving-average representation.
struct TimeQuadrature {
    double da = 0.0, db = 0.0;
    int nqa = 0, nqb = 0;

    double node_a(int q) const { return (q + 0.5) * da; }
    double node_b(int q) const { return (q + 0.5) * db; }
    double weight() const { return da * db; }
};

/// Discretized moving-average representation shared by the order-k
/// sampler, the semimartingale sampler, and white-noise Wiener
/// integration: cell-averaged kernel weights against a Brownian
/// increment grid, one weight matrix per axis.
class MovingAverageScheme {
public:
    MovingAverageScheme(const FieldParams& params, const TimeQuadrature& quad,
                        const Grid2D& noise_grid);

    const TimeQuadrature& quadrature() const { return quad_; }
    const Grid2D& noise_grid() const { return noise_; }

    /// Z at the anchor (na*da, nb*db) for one noise draw; node-major
    /// evaluation (quadrature nodes outside, noise sum inside) for any k.
    /// For k = 2 the diagonal of the quadratic form carries the Wick
    /// (xi^2 - var) replacement; k = 3 sums over distinct triples via
    /// power sums. k >= 4 exceeds the combinatorial budget.
    std::vector<double> field_node_major(const NoiseGrid& noise,
                                         const std::vector<int>& bounds_a,
                                         const std::vector<int>& bounds_b) const;

    /// k = 1 only: aggregate the per-cell kernel weights first, then pair
    /// with the noise (the same double sum as node-major, reassociated).
    std::vector<double> field_cell_major(const NoiseGrid& noise,
                                         const std::vector<int>& bounds_a,
                                         const std::vector<int>& bounds_b) const;

    /// Exact second moment of the discretized field at an anchor, from the
    /// scheme's own weights (no Monte Carlo), k <= 3.
    double discrete_variance(int bound_a, int bound_b) const;

    /// White-noise pairing weights for Wiener integration: the per-cell
    /// coefficients of sum_q w_q f(a_q, b_q) * averaged-kernel, i.e. the
    /// discretization of Gamma(b1) Gamma(b2) I^beta_- f. f is tabulated on
    /// the quadrature node lattice.
    std::vector<double> white_noise_weights(const Field2D& f_on_nodes) const;

    /// Zero-mean constant emitted by the k=2 Wick correction when the
    /// noise is identically zero.
    double wick_constant(int bound_a, int bound_b) const;

private:
    FieldParams params_;
    TimeQuadrature quad_;
    Grid2D noise_;
    std::vector<double> u_, v_;    // (nqa x ncx), (nqb x ncy) cell-averaged kernels
    std::vector<double> su_, sv_;  // per-node sum of squared weights * cell side
};

/// Default discretization choices: noise cell <= min(1/(8 lambda),
/// anchor spacing / 4), support window from the kernel tail, quadrature
/// step aligned to anchors and no coarser than the noise cells.
Grid2D suggest_noise_grid(const FieldParams& params, const Grid2D& anchors, double tail_tol = 1e-9);
TimeQuadrature quadrature_for_anchors(const FieldParams& params, const Grid2D& anchors,
                                      const Grid2D& noise_grid,
                                      std::vector<int>* bounds_a = nullptr,
                                      std::vector<int>* bounds_b = nullptr);

/// Exact Gaussian order-1 sampling at an arbitrary anchor list: Cholesky
/// factor of the covariance matrix, diagonal ridge escalation, one factor
/// for many draws. Anchors with a zero coordinate yield exact zeros.
class ListCholeskySampler {
public:
    ListCholeskySampler(const FieldParams& params, std::vector<std::pair<double, double>> anchors);
    std::vector<double> sample(const SeedSpec& seed) const;
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const std::vector<std::pair<double, double>>& anchors() const { return anchors_; }

private:
    FieldParams params_;
    std::vector<std::pair<double, double>> anchors_;
    std::vector<std::size_t> index_;  // positive-anchor slots
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd chol_;
};

/// Grid-anchored wrapper producing SamplePath objects.
class Order1CholeskySampler {
public:
    Order1CholeskySampler(const FieldParams& params, const Grid2D& anchors);
    SamplePath sample(const SeedSpec& seed) const;
    const Eigen::MatrixXd& covariance() const { return list_.covariance(); }

private:
    FieldParams params_;
    Grid2D anchors_;
    ListCholeskySampler list_;
};

SamplePath sample_order1_cholesky(const FieldParams& params, const Grid2D& anchors,
                                  const SeedSpec& seed);

/// Spectral synthesis of the order-1 field over a symmetric frequency
/// lattice with Hermitian-paired complex Gaussian weights.
SamplePath sample_order1_spectral(const FieldParams& params, const Grid2D& anchors,
                                  const Grid2D& freq_grid, const SeedSpec& seed);

/// Frequency lattice with cutoff 64/lambda per axis and the given number
/// of modes, half-integer offset so no self-conjugate cell exists.
Grid2D suggest_freq_grid(const FieldParams& params, int modes_per_axis = 4096);

/// Lattice-exact variance of the spectral discretization at one anchor
/// (the Monte Carlo sampler fluctuates around this number).
double spectral_lattice_variance(const FieldParams& params, const Grid2D& freq_grid,
                                 double t, double s);

/// Order-k sampling by the discretized multiple Wiener integral.
SamplePath sample_orderk_moving_average(const FieldParams& params, const Grid2D& anchors,
                                        const Grid2D& noise_grid, const SeedSpec& seed);

/// H1, H2 > 1 decomposition: tabulate the stationary density field M by
/// convolving the noise with the cell-averaged kernel, then integrate
/// cumulatively. Refuses H <= 1, where the field is not a semimartingale.
SamplePath sample_semimartingale(const FieldParams& params, const Grid2D& anchors,
                                 const Grid2D& noise_grid, const SeedSpec& seed);

}
