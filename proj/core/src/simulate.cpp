#include "thfield/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "thfield/errors.hpp"
#include "thfield/kernels.hpp"
#include "thfield/specfun.hpp"

namespace thfield {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950;

bool near_integer_multiple(double x, double step, double tol = 1e-9) {
    const double q = x / step;
    return std::abs(q - std::round(q)) < tol * std::max(1.0, std::abs(q));
}
}  // namespace

const char* to_string(SampleMethod m) {
    switch (m) {
        case SampleMethod::cholesky: return "cholesky";
        case SampleMethod::spectral: return "spectral";
        case SampleMethod::moving_average: return "moving_average";
        case SampleMethod::semimartingale: return "semimartingale";
    }
    return "unknown";
}

SampleMethod sample_method_from_string(const std::string& s) {
    if (s == "cholesky") return SampleMethod::cholesky;
    if (s == "spectral") return SampleMethod::spectral;
    if (s == "moving_average") return SampleMethod::moving_average;
    if (s == "semimartingale") return SampleMethod::semimartingale;
    throw std::invalid_argument("unknown sample method: " + s);
}

double SamplePath::value_at(double t, double s) const {
    if (t == 0.0 || s == 0.0) return 0.0;
    const double qi = (t - anchors.x0) / anchors.dx;
    const double qj = (s - anchors.y0) / anchors.dy;
    const int i = static_cast<int>(std::lround(qi));
    const int j = static_cast<int>(std::lround(qj));
    if (i < 0 || i >= anchors.nx || j < 0 || j >= anchors.ny ||
        std::abs(qi - i) > 1e-9 || std::abs(qj - j) > 1e-9)
        throw std::invalid_argument("SamplePath::value_at: not an anchor of this path");
    return at(i, j);
}

MovingAverageScheme::MovingAverageScheme(const FieldParams& params, const TimeQuadrature& quad,
                                         const Grid2D& noise_grid)
    : params_(params), quad_(quad), noise_(noise_grid) {
    params_.validate();
    noise_.validate();
    if (quad_.nqa < 1 || quad_.nqb < 1 || !(quad_.da > 0.0) || !(quad_.db > 0.0))
        throw std::invalid_argument("MovingAverageScheme: empty time quadrature");

    const TemperedPowerKernel k1{params_.kernel_power1(), params_.lambda1};
    const TemperedPowerKernel k2{params_.kernel_power2(), params_.lambda2};

    const int ncx = noise_.nx, ncy = noise_.ny;
    u_.assign(static_cast<std::size_t>(quad_.nqa) * ncx, 0.0);
    v_.assign(static_cast<std::size_t>(quad_.nqb) * ncy, 0.0);
    su_.assign(quad_.nqa, 0.0);
    sv_.assign(quad_.nqb, 0.0);

    for (int q = 0; q < quad_.nqa; ++q) {
        const double a = quad_.node_a(q);
        double ss = 0.0;
        for (int c = 0; c < ncx; ++c) {
            const double xl = noise_.x0 + c * noise_.dx;
            const double w = k1.cell_integral(a - xl - noise_.dx, a - xl) / noise_.dx;
            u_[static_cast<std::size_t>(q) * ncx + c] = w;
            ss += w * w;
        }
        su_[q] = ss * noise_.dx;
    }
    for (int q = 0; q < quad_.nqb; ++q) {
        const double b = quad_.node_b(q);
        double ss = 0.0;
        for (int c = 0; c < ncy; ++c) {
            const double yl = noise_.y0 + c * noise_.dy;
            const double w = k2.cell_integral(b - yl - noise_.dy, b - yl) / noise_.dy;
            v_[static_cast<std::size_t>(q) * ncy + c] = w;
            ss += w * w;
        }
        sv_[q] = ss * noise_.dy;
    }
}

std::vector<double> MovingAverageScheme::field_node_major(const NoiseGrid& noise,
                                                          const std::vector<int>& bounds_a,
                                                          const std::vector<int>& bounds_b) const {
    if (!noise.grid.same_layout(noise_))
        throw GridMismatchError("MovingAverageScheme: noise grid does not match the scheme");
    const int k = params_.k;
    if (k >= 4)
        throw BudgetError("MovingAverageScheme: multiple integrals of order k >= 4 exceed the budget");
    const int ncx = noise_.nx, ncy = noise_.ny;
    const int nqa = quad_.nqa, nqb = quad_.nqb;

    // S(q) = sum_c kappa_q(c) xi_c, built separably: T = Xi V^T then U-row dot
    auto gemm_nodes = [&](const double* U, const double* V, const double* xi,
                          std::vector<double>& out) {
        std::vector<double> t(static_cast<std::size_t>(ncx) * nqb, 0.0);
        for (int cx = 0; cx < ncx; ++cx) {
            const double* xrow = xi + static_cast<std::size_t>(cx) * ncy;
            for (int qb = 0; qb < nqb; ++qb) {
                const double* vrow = V + static_cast<std::size_t>(qb) * ncy;
                double acc = 0.0;
                for (int cy = 0; cy < ncy; ++cy) acc += xrow[cy] * vrow[cy];
                t[static_cast<std::size_t>(cx) * nqb + qb] = acc;
            }
        }
        out.assign(static_cast<std::size_t>(nqa) * nqb, 0.0);
        for (int qa = 0; qa < nqa; ++qa) {
            const double* urow = U + static_cast<std::size_t>(qa) * ncx;
            for (int qb = 0; qb < nqb; ++qb) {
                double acc = 0.0;
                for (int cx = 0; cx < ncx; ++cx) acc += urow[cx] * t[static_cast<std::size_t>(cx) * nqb + qb];
                out[static_cast<std::size_t>(qa) * nqb + qb] = acc;
            }
        }
    };

    std::vector<double> s;
    gemm_nodes(u_.data(), v_.data(), noise.values.data(), s);

    std::vector<double> p2, p3;
    if (k >= 2) {
        // p2(q) = sum_c kappa^2 xi^2 and p3(q) = sum_c kappa^3 xi^3 via the
        // elementwise-powered matrices
        std::vector<double> u2(u_.size()), v2(v_.size()), xi2(noise.values.size());
        for (std::size_t i = 0; i < u_.size(); ++i) u2[i] = u_[i] * u_[i];
        for (std::size_t i = 0; i < v_.size(); ++i) v2[i] = v_[i] * v_[i];
        for (std::size_t i = 0; i < xi2.size(); ++i) xi2[i] = noise.values[i] * noise.values[i];
        gemm_nodes(u2.data(), v2.data(), xi2.data(), p2);
        if (k == 3) {
            std::vector<double> u3(u_.size()), v3(v_.size()), xi3(noise.values.size());
            for (std::size_t i = 0; i < u_.size(); ++i) u3[i] = u2[i] * u_[i];
            for (std::size_t i = 0; i < v_.size(); ++i) v3[i] = v2[i] * v_[i];
            for (std::size_t i = 0; i < xi3.size(); ++i) xi3[i] = xi2[i] * noise.values[i];
            gemm_nodes(u3.data(), v3.data(), xi3.data(), p3);
        }
    }

    // per-node multiple-integral value
    std::vector<double> node(static_cast<std::size_t>(nqa) * nqb);
    for (int qa = 0; qa < nqa; ++qa) {
        for (int qb = 0; qb < nqb; ++qb) {
            const std::size_t q = static_cast<std::size_t>(qa) * nqb + qb;
            if (k == 1) {
                node[q] = s[q];
            } else if (k == 2) {
                // Wick replacement: su * sv = dx dy sum_c kappa^2 = E[S^2]
                node[q] = s[q] * s[q] - su_[qa] * sv_[qb];
            } else {
                node[q] = s[q] * s[q] * s[q] - 3.0 * s[q] * p2[q] + 2.0 * p3[q];
            }
        }
    }

    // cumulative sums up to each anchor boundary
    std::vector<double> out(bounds_a.size() * bounds_b.size(), 0.0);
    std::vector<double> prefix(static_cast<std::size_t>(nqa + 1) * (nqb + 1), 0.0);
    for (int qa = 0; qa < nqa; ++qa)
        for (int qb = 0; qb < nqb; ++qb)
            prefix[static_cast<std::size_t>(qa + 1) * (nqb + 1) + (qb + 1)] =
                node[static_cast<std::size_t>(qa) * nqb + qb] +
                prefix[static_cast<std::size_t>(qa) * (nqb + 1) + (qb + 1)] +
                prefix[static_cast<std::size_t>(qa + 1) * (nqb + 1) + qb] -
                prefix[static_cast<std::size_t>(qa) * (nqb + 1) + qb];
    const double w = quad_.weight();
    for (std::size_t ia = 0; ia < bounds_a.size(); ++ia)
        for (std::size_t jb = 0; jb < bounds_b.size(); ++jb)
            out[ia * bounds_b.size() + jb] =
                w * prefix[static_cast<std::size_t>(bounds_a[ia]) * (nqb + 1) + bounds_b[jb]];
    return out;
}

std::vector<double> MovingAverageScheme::field_cell_major(const NoiseGrid& noise,
                                                          const std::vector<int>& bounds_a,
                                                          const std::vector<int>& bounds_b) const {
    if (params_.k != 1)
        throw UnsupportedRangeError("field_cell_major: cell-major aggregation applies to k=1");
    if (!noise.grid.same_layout(noise_))
        throw GridMismatchError("MovingAverageScheme: noise grid does not match the scheme");
    const int ncx = noise_.nx, ncy = noise_.ny;

    // cumulative kernel weights per cell up to each bound: CU(ia, cx)
    std::vector<double> cu(bounds_a.size() * ncx, 0.0), cv(bounds_b.size() * ncy, 0.0);
    {
        std::vector<double> acc(ncx, 0.0);
        int q = 0;
        for (std::size_t ia = 0; ia < bounds_a.size(); ++ia) {
            for (; q < bounds_a[ia]; ++q)
                for (int c = 0; c < ncx; ++c)
                    acc[c] += quad_.da * u_[static_cast<std::size_t>(q) * ncx + c];
            std::copy(acc.begin(), acc.end(), cu.begin() + ia * ncx);
        }
    }
    {
        std::vector<double> acc(ncy, 0.0);
        int q = 0;
        for (std::size_t jb = 0; jb < bounds_b.size(); ++jb) {
            for (; q < bounds_b[jb]; ++q)
                for (int c = 0; c < ncy; ++c)
                    acc[c] += quad_.db * v_[static_cast<std::size_t>(q) * ncy + c];
            std::copy(acc.begin(), acc.end(), cv.begin() + jb * ncy);
        }
    }

    std::vector<double> out(bounds_a.size() * bounds_b.size(), 0.0);
    for (std::size_t ia = 0; ia < bounds_a.size(); ++ia) {
        // t(cy) = sum_cx CU(ia,cx) xi(cx,cy)
        std::vector<double> t(ncy, 0.0);
        for (int cx = 0; cx < ncx; ++cx) {
            const double w = cu[ia * ncx + cx];
            if (w == 0.0) continue;
            const double* xrow = noise.values.data() + static_cast<std::size_t>(cx) * ncy;
            for (int cy = 0; cy < ncy; ++cy) t[cy] += w * xrow[cy];
        }
        for (std::size_t jb = 0; jb < bounds_b.size(); ++jb) {
            double acc = 0.0;
            const double* cvrow = cv.data() + jb * ncy;
            for (int cy = 0; cy < ncy; ++cy) acc += cvrow[cy] * t[cy];
            out[ia * bounds_b.size() + jb] = acc;
        }
    }
    return out;
}

double MovingAverageScheme::discrete_variance(int bound_a, int bound_b) const {
    const int k = params_.k;
    const int nqa = std::min(bound_a, quad_.nqa), nqb = std::min(bound_b, quad_.nqb);
    const int ncx = noise_.nx, ncy = noise_.ny;
    const double w = quad_.weight();

    // axis Gram matrices G(q,p) = dx sum_c u_q(c) u_p(c), restricted below
    // the bound; the variance of the order-k distinct-index sum needs its
    // entrywise powers up to k
    auto gram = [](const std::vector<double>& m, int nq, int nc, double h) {
        std::vector<double> g(static_cast<std::size_t>(nq) * nq);
        for (int q = 0; q < nq; ++q)
            for (int p = q; p < nq; ++p) {
                double acc = 0.0;
                const double* a = m.data() + static_cast<std::size_t>(q) * nc;
                const double* b = m.data() + static_cast<std::size_t>(p) * nc;
                for (int c = 0; c < nc; ++c) acc += a[c] * b[c];
                g[static_cast<std::size_t>(q) * nq + p] = g[static_cast<std::size_t>(p) * nq + q] = acc * h;
            }
        return g;
    };
    const auto gx = gram(u_, nqa, ncx, noise_.dx);
    const auto gy = gram(v_, nqb, ncy, noise_.dy);

    if (k == 1) {
        double sgx = 0.0, sgy = 0.0;
        for (int q = 0; q < nqa; ++q)
            for (int p = 0; p < nqa; ++p) sgx += gx[static_cast<std::size_t>(q) * nqa + p];
        for (int q = 0; q < nqb; ++q)
            for (int p = 0; p < nqb; ++p) sgy += gy[static_cast<std::size_t>(q) * nqb + p];
        return w * w * sgx * sgy;
    }

    if (k == 2) {
        // Wick-corrected quadratic form: E[T_q T_p] = 2 E[S_q S_p]^2, and
        // E[S_q S_p] = Gx Gy factorizes per axis
        double sgx2 = 0.0, sgy2 = 0.0;
        for (const double v : gx) sgx2 += v * v;
        for (const double v : gy) sgy2 += v * v;
        return w * w * 2.0 * sgx2 * sgy2;
    }

    // k == 3 distinct-triple sum: E[T_q T_p] = P1^3 - 3 P1 P2 + 2 P3
    std::vector<double> u2(u_.size()), v2(v_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) u2[i] = u_[i] * u_[i];
    for (std::size_t i = 0; i < v_.size(); ++i) v2[i] = v_[i] * v_[i];
    const auto g2x = gram(u2, nqa, ncx, noise_.dx * noise_.dx);
    const auto g2y = gram(v2, nqb, ncy, noise_.dy * noise_.dy);
    std::vector<double> u3(u_.size()), v3(v_.size());
    for (std::size_t i = 0; i < u_.size(); ++i) u3[i] = u2[i] * u_[i];
    for (std::size_t i = 0; i < v_.size(); ++i) v3[i] = v2[i] * v_[i];
    const auto g3x = gram(u3, nqa, ncx, std::pow(noise_.dx, 3));
    const auto g3y = gram(v3, nqb, ncy, std::pow(noise_.dy, 3));
    double acc = 0.0;
    for (int qa = 0; qa < nqa; ++qa)
        for (int pa = 0; pa < nqa; ++pa) {
            const std::size_t ia = static_cast<std::size_t>(qa) * nqa + pa;
            for (int qb = 0; qb < nqb; ++qb)
                for (int pb = 0; pb < nqb; ++pb) {
                    const std::size_t ib = static_cast<std::size_t>(qb) * nqb + pb;
                    const double p1 = gx[ia] * gy[ib];
                    const double p2 = g2x[ia] * g2y[ib];
                    const double p3 = g3x[ia] * g3y[ib];
                    acc += p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3;
                }
        }
    return w * w * acc;
}

std::vector<double> MovingAverageScheme::white_noise_weights(const Field2D& f_on_nodes) const {
    if (f_on_nodes.grid.nx != quad_.nqa || f_on_nodes.grid.ny != quad_.nqb)
        throw GridMismatchError("white_noise_weights: field not on the quadrature node lattice");
    const int ncx = noise_.nx, ncy = noise_.ny;
    // per-cell coefficient: sum_q w_q f(q) u_qa(cx) v_qb(cy); separable as
    // (U^T F V) scaled by the weight
    std::vector<double> t(static_cast<std::size_t>(ncx) * quad_.nqb, 0.0);
    for (int cx = 0; cx < ncx; ++cx)
        for (int qa = 0; qa < quad_.nqa; ++qa) {
            const double uqc = u_[static_cast<std::size_t>(qa) * ncx + cx];
            if (uqc == 0.0) continue;
            for (int qb = 0; qb < quad_.nqb; ++qb)
                t[static_cast<std::size_t>(cx) * quad_.nqb + qb] += uqc * f_on_nodes.at(qa, qb);
        }
    std::vector<double> out(static_cast<std::size_t>(ncx) * ncy, 0.0);
    for (int cx = 0; cx < ncx; ++cx)
        for (int cy = 0; cy < ncy; ++cy) {
            double acc = 0.0;
            for (int qb = 0; qb < quad_.nqb; ++qb)
                acc += t[static_cast<std::size_t>(cx) * quad_.nqb + qb] *
                       v_[static_cast<std::size_t>(qb) * ncy + cy];
            out[static_cast<std::size_t>(cx) * ncy + cy] = acc * quad_.weight();
        }
    return out;
}

double MovingAverageScheme::wick_constant(int bound_a, int bound_b) const {
    if (params_.k != 2) return 0.0;
    double acc = 0.0;
    for (int qa = 0; qa < std::min(bound_a, quad_.nqa); ++qa)
        for (int qb = 0; qb < std::min(bound_b, quad_.nqb); ++qb)
            acc += su_[qa] * sv_[qb];
    return -quad_.weight() * acc;
}

Grid2D suggest_noise_grid(const FieldParams& params, const Grid2D& anchors, double tail_tol) {
    params.validate();
    anchors.validate();
    const double ta = anchors.x0 + (anchors.nx - 1) * anchors.dx;
    const double tb = anchors.y0 + (anchors.ny - 1) * anchors.dy;
    const TemperedPowerKernel k1{params.kernel_power1(), params.lambda1};
    const TemperedPowerKernel k2{params.kernel_power2(), params.lambda2};
    const double wx = k1.tail_cutoff(tail_tol);
    const double wy = k2.tail_cutoff(tail_tol);
    Grid2D g;
    g.dx = std::min(1.0 / (8.0 * params.lambda1), anchors.dx / 4.0);
    g.dy = std::min(1.0 / (8.0 * params.lambda2), anchors.dy / 4.0);
    g.nx = static_cast<int>(std::ceil((ta + wx) / g.dx));
    g.ny = static_cast<int>(std::ceil((tb + wy) / g.dy));
    g.x0 = ta - g.nx * g.dx;
    g.y0 = tb - g.ny * g.dy;
    return g;
}

TimeQuadrature quadrature_for_anchors(const FieldParams& params, const Grid2D& anchors,
                                      const Grid2D& noise_grid, std::vector<int>* bounds_a,
                                      std::vector<int>* bounds_b) {
    (void)params;
    anchors.validate();
    const double ta = anchors.x0 + (anchors.nx - 1) * anchors.dx;
    const double tb = anchors.y0 + (anchors.ny - 1) * anchors.dy;
    if (anchors.x0 < 0.0 || anchors.y0 < 0.0)
        throw std::invalid_argument("quadrature_for_anchors: anchors must be nonnegative");

    // quadrature step: divide the anchor spacing until no coarser than the
    // noise cells; anchor coordinates must land on lattice boundaries
    const int ma = std::max(1, static_cast<int>(std::ceil(anchors.dx / noise_grid.dx)));
    const int mb = std::max(1, static_cast<int>(std::ceil(anchors.dy / noise_grid.dy)));
    TimeQuadrature q;
    q.da = anchors.dx / ma;
    q.db = anchors.dy / mb;
    for (int i = 0; i < anchors.nx; ++i)
        if (!near_integer_multiple(anchors.node_x(i), q.da))
            throw std::invalid_argument("quadrature_for_anchors: anchor t not on the lattice");
    for (int j = 0; j < anchors.ny; ++j)
        if (!near_integer_multiple(anchors.node_y(j), q.db))
            throw std::invalid_argument("quadrature_for_anchors: anchor s not on the lattice");
    q.nqa = static_cast<int>(std::lround(ta / q.da));
    q.nqb = static_cast<int>(std::lround(tb / q.db));
    if (bounds_a) {
        bounds_a->clear();
        for (int i = 0; i < anchors.nx; ++i)
            bounds_a->push_back(static_cast<int>(std::lround(anchors.node_x(i) / q.da)));
    }
    if (bounds_b) {
        bounds_b->clear();
        for (int j = 0; j < anchors.ny; ++j)
            bounds_b->push_back(static_cast<int>(std::lround(anchors.node_y(j) / q.db)));
    }
    return q;
}

ListCholeskySampler::ListCholeskySampler(const FieldParams& params,
                                         std::vector<std::pair<double, double>> anchors)
    : params_(params), anchors_(std::move(anchors)) {
    params_.validate();
    if (params_.k != 1)
        throw UnsupportedRangeError("ListCholeskySampler: exact Gaussian sampling needs k=1");

    // positive anchors enter the Gram matrix; axis anchors stay pinned at 0
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < anchors_.size(); ++i) {
        const auto [t, s] = anchors_[i];
        if (t < 0.0 || s < 0.0)
            throw std::invalid_argument("ListCholeskySampler: negative anchor");
        if (t > 0.0 && s > 0.0) {
            pts.emplace_back(t, s);
            index_.push_back(i);
        }
    }
    if (pts.empty()) return;

    cov_ = covariance_matrix(params_, pts);
    const double base = cov_.diagonal().maxCoeff();
    double ridge = 1e-12 * base;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (;;) {
        Eigen::MatrixXd m = cov_;
        m.diagonal().array() += ridge;
        llt.compute(m);
        if (llt.info() == Eigen::Success) break;
        ridge *= 2.0;
        if (ridge > 1e-8 * base)
            throw ConditioningError("ListCholeskySampler: covariance failed to factor at max ridge");
    }
    chol_ = llt.matrixL();
}

std::vector<double> ListCholeskySampler::sample(const SeedSpec& seed) const {
    std::vector<double> out(anchors_.size(), 0.0);
    if (index_.empty()) return out;
    Eigen::VectorXd g(static_cast<Eigen::Index>(index_.size()));
    for (std::size_t i = 0; i < index_.size(); ++i)
        g(static_cast<Eigen::Index>(i)) = rng::normal_at(seed, i);
    const Eigen::VectorXd z = chol_ * g;
    for (std::size_t i = 0; i < index_.size(); ++i)
        out[index_[i]] = z(static_cast<Eigen::Index>(i));
    return out;
}

namespace {
std::vector<std::pair<double, double>> grid_anchor_list(const Grid2D& g) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(g.size());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) pts.emplace_back(g.node_x(i), g.node_y(j));
    return pts;
}
}  // namespace

Order1CholeskySampler::Order1CholeskySampler(const FieldParams& params, const Grid2D& anchors)
    : params_(params), anchors_(anchors), list_(params, grid_anchor_list(anchors)) {
    anchors_.validate();
}

SamplePath Order1CholeskySampler::sample(const SeedSpec& seed) const {
    SamplePath path;
    path.params = params_;
    path.anchors = anchors_;
    path.method = SampleMethod::cholesky;
    path.values = list_.sample(seed);
    return path;
}

SamplePath sample_order1_cholesky(const FieldParams& params, const Grid2D& anchors,
                                  const SeedSpec& seed) {
    return Order1CholeskySampler(params, anchors).sample(seed);
}

Grid2D suggest_freq_grid(const FieldParams& params, int modes_per_axis) {
    params.validate();
    const double cut1 = 64.0 / params.lambda1;
    const double cut2 = 64.0 / params.lambda2;
    Grid2D g;
    g.nx = modes_per_axis;
    g.ny = modes_per_axis;
    g.dx = 2.0 * cut1 / modes_per_axis;
    g.dy = 2.0 * cut2 / modes_per_axis;
    g.x0 = -cut1 + 0.5 * g.dx;
    g.y0 = -cut2 + 0.5 * g.dy;
    return g;
}

namespace {

void require_symmetric(const Grid2D& g) {
    const double cx = g.x0 + 0.5 * (g.nx - 1) * g.dx;
    const double cy = g.y0 + 0.5 * (g.ny - 1) * g.dy;
    if (std::abs(cx) > 1e-9 * g.dx || std::abs(cy) > 1e-9 * g.dy)
        throw std::invalid_argument("frequency grid must be symmetric about the origin");
}

// (1 - e^{-i xi t}) / (i xi), the transform of the interval indicator
std::complex<double> interval_transform(double t, double xi) {
    if (xi == 0.0) return {t, 0.0};
    const std::complex<double> num = 1.0 - std::exp(std::complex<double>(0.0, -xi * t));
    return num / std::complex<double>(0.0, xi);
}

}  // namespace

double spectral_lattice_variance(const FieldParams& params, const Grid2D& freq_grid,
                                 double t, double s) {
    params.validate();
    require_symmetric(freq_grid);
    if (params.k != 1)
        throw UnsupportedRangeError("spectral_lattice_variance: k=1 only");
    const double b1 = params.H1 - 0.5, b2 = params.H2 - 0.5;
    double accx = 0.0, accy = 0.0;
    for (int m = 0; m < freq_grid.nx; ++m) {
        const double xi = freq_grid.node_x(m);
        accx += std::norm(interval_transform(t, xi)) *
                std::pow(params.lambda1 * params.lambda1 + xi * xi, -b1) * freq_grid.dx;
    }
    for (int n = 0; n < freq_grid.ny; ++n) {
        const double om = freq_grid.node_y(n);
        accy += std::norm(interval_transform(s, om)) *
                std::pow(params.lambda2 * params.lambda2 + om * om, -b2) * freq_grid.dy;
    }
    const double coeff = gamma_fn(b1) * gamma_fn(b2) / (2.0 * kPi);
    return coeff * coeff * accx * accy;
}

SamplePath sample_order1_spectral(const FieldParams& params, const Grid2D& anchors,
                                  const Grid2D& freq_grid, const SeedSpec& seed) {
    params.validate();
    anchors.validate();
    freq_grid.validate();
    require_symmetric(freq_grid);
    if (params.k != 1)
        throw UnsupportedRangeError("sample_order1_spectral: spectral synthesis holds for k=1");

    const int M = freq_grid.nx, N = freq_grid.ny;
    const double b1 = params.H1 - 0.5, b2 = params.H2 - 0.5;
    const double area = freq_grid.cell_area();

    // Hermitian Gaussian measure on the lattice: draw the lower half,
    // mirror-conjugate the rest, real weight on self-conjugate cells
    std::vector<std::complex<double>> wnoise(static_cast<std::size_t>(M) * N);
    const double half = std::sqrt(0.5 * area);
    for (int m = 0; m < M; ++m) {
        for (int n = 0; n < N; ++n) {
            const int mm = M - 1 - m, mn = N - 1 - n;
            const std::size_t ij = static_cast<std::size_t>(m) * N + n;
            const std::size_t ji = static_cast<std::size_t>(mm) * N + mn;
            if (ij < ji) {
                const double g1 = rng::normal_at(seed, 2 * ij);
                const double g2 = rng::normal_at(seed, 2 * ij + 1);
                wnoise[ij] = std::complex<double>(g1 * half, g2 * half);
                wnoise[ji] = std::conj(wnoise[ij]);
            } else if (ij == ji) {
                wnoise[ij] = std::complex<double>(rng::normal_at(seed, 2 * ij) * std::sqrt(area), 0.0);
            }
        }
    }

    // separable anchor factors: A(t_i, xi_m) and B(s_j, om_n)
    std::vector<std::complex<double>> ax(static_cast<std::size_t>(anchors.nx) * M);
    std::vector<std::complex<double>> by(static_cast<std::size_t>(anchors.ny) * N);
    for (int i = 0; i < anchors.nx; ++i) {
        const double t = anchors.node_x(i);
        for (int m = 0; m < M; ++m) {
            const double xi = freq_grid.node_x(m);
            ax[static_cast<std::size_t>(i) * M + m] =
                interval_transform(t, xi) *
                std::pow(std::complex<double>(params.lambda1, -xi), -b1);
        }
    }
    for (int j = 0; j < anchors.ny; ++j) {
        const double s = anchors.node_y(j);
        for (int n = 0; n < N; ++n) {
            const double om = freq_grid.node_y(n);
            by[static_cast<std::size_t>(j) * N + n] =
                interval_transform(s, om) *
                std::pow(std::complex<double>(params.lambda2, -om), -b2);
        }
    }

    SamplePath path;
    path.params = params;
    path.anchors = anchors;
    path.method = SampleMethod::spectral;
    path.values.assign(anchors.size(), 0.0);
    const double coeff = gamma_fn(b1) * gamma_fn(b2) / (2.0 * kPi);

    // T(m, j) = sum_n wnoise(m,n) B(j,n)
    std::vector<std::complex<double>> tmj(static_cast<std::size_t>(M) * anchors.ny, 0.0);
    for (int m = 0; m < M; ++m) {
        const std::complex<double>* wrow = wnoise.data() + static_cast<std::size_t>(m) * N;
        for (int j = 0; j < anchors.ny; ++j) {
            const std::complex<double>* brow = by.data() + static_cast<std::size_t>(j) * N;
            std::complex<double> acc = 0.0;
            for (int n = 0; n < N; ++n) acc += wrow[n] * brow[n];
            tmj[static_cast<std::size_t>(m) * anchors.ny + j] = acc;
        }
    }
    double max_abs = 0.0, max_imag = 0.0;
    for (int i = 0; i < anchors.nx; ++i) {
        for (int j = 0; j < anchors.ny; ++j) {
            std::complex<double> acc = 0.0;
            const std::complex<double>* arow = ax.data() + static_cast<std::size_t>(i) * M;
            for (int m = 0; m < M; ++m) acc += arow[m] * tmj[static_cast<std::size_t>(m) * anchors.ny + j];
            acc *= coeff;
            const double t = anchors.node_x(i), s = anchors.node_y(j);
            path.values[anchors.index(i, j)] = (t == 0.0 || s == 0.0) ? 0.0 : acc.real();
            max_abs = std::max(max_abs, std::abs(acc));
            max_imag = std::max(max_imag, std::abs(acc.imag()));
        }
    }
    if (max_imag > 1e-9 * std::max(max_abs, 1e-300))
        throw AliasingError("sample_order1_spectral: Hermitian pairing left an imaginary residue");
    return path;
}

namespace {

SamplePath moving_average_impl(const FieldParams& params, const Grid2D& anchors,
                               const Grid2D& noise_grid, const SeedSpec& seed, bool semimartingale) {
    params.validate();
    anchors.validate();
    if (semimartingale) {
        if (params.k != 1)
            throw UnsupportedRangeError("sample_semimartingale: decomposition holds for k=1");
        if (!(params.H1 > 1.0) || !(params.H2 > 1.0))
            throw UnsupportedRangeError(
                "sample_semimartingale: needs H1 > 1 and H2 > 1; the field is not a "
                "semimartingale for H in (1/2, 1)");
    }
    std::vector<int> ba, bb;
    const TimeQuadrature quad = quadrature_for_anchors(params, anchors, noise_grid, &ba, &bb);
    const MovingAverageScheme scheme(params, quad, noise_grid);
    const NoiseGrid noise = make_noise_grid(noise_grid, seed);

    std::vector<double> vals;
    if (semimartingale) {
        vals = scheme.field_node_major(noise, ba, bb);  // cumulative integral of the density field
    } else if (params.k == 1) {
        vals = scheme.field_cell_major(noise, ba, bb);
    } else {
        vals = scheme.field_node_major(noise, ba, bb);
    }

    SamplePath path;
    path.params = params;
    path.anchors = anchors;
    path.method = semimartingale ? SampleMethod::semimartingale : SampleMethod::moving_average;
    path.values.assign(anchors.size(), 0.0);
    for (int i = 0; i < anchors.nx; ++i)
        for (int j = 0; j < anchors.ny; ++j) {
            const double t = anchors.node_x(i), s = anchors.node_y(j);
            if (t > 0.0 && s > 0.0)
                path.values[anchors.index(i, j)] =
                    vals[static_cast<std::size_t>(i) * anchors.ny + j];
        }
    return path;
}

}  // namespace

SamplePath sample_orderk_moving_average(const FieldParams& params, const Grid2D& anchors,
                                        const Grid2D& noise_grid, const SeedSpec& seed) {
    return moving_average_impl(params, anchors, noise_grid, seed, false);
}

SamplePath sample_semimartingale(const FieldParams& params, const Grid2D& anchors,
                                 const Grid2D& noise_grid, const SeedSpec& seed) {
    return moving_average_impl(params, anchors, noise_grid, seed, true);
}

}
