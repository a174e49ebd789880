#include "thfield/tfcalc.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "thfield/errors.hpp"
#include "thfield/fft.hpp"
#include "thfield/quadrature.hpp"
#include "thfield/specfun.hpp"

namespace thfield {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950;
constexpr int kStencilLo = -2;  // interpolation nodes -2..3 around each kernel cell
constexpr int kStencilHi = 3;

// Coefficients of the Lagrange basis L_d(s) on nodes {-2,...,3}, as
// polynomials in s (column j is the s^j coefficient).
std::array<std::array<double, 6>, 6> lagrange_coeffs() {
    std::array<std::array<double, 6>, 6> c{};
    for (int d = kStencilLo; d <= kStencilHi; ++d) {
        // build prod_(e != d) (s - e)/(d - e) incrementally
        std::array<double, 6> poly{};
        poly[0] = 1.0;
        int deg = 0;
        double denom = 1.0;
        for (int e = kStencilLo; e <= kStencilHi; ++e) {
            if (e == d) continue;
            for (int j = deg + 1; j >= 1; --j) poly[j] = poly[j - 1] - e * poly[j];
            poly[0] = -e * poly[0];
            ++deg;
            denom *= (d - e);
        }
        for (int j = 0; j < 6; ++j) c[d - kStencilLo][j] = poly[j] / denom;
    }
    return c;
}

const std::array<std::array<double, 6>, 6>& lagrange() {
    static const auto c = lagrange_coeffs();
    return c;
}

// Shifted kernel moments over one cell: int_cell k(u) ((u - m h)/h)^j du,
// j = 0..jmax. The first cell [0, h/2) is integrated with the power
// substitution that absorbs u^(g-1); later cells are smooth.
void cell_moments(const std::function<double(double)>& kernel_smooth, double power_sigma,
                  double h, int m, int jmax, double* out) {
    const double a = (m == 0) ? 0.0 : (m - 0.5) * h;
    const double b = (m + 0.5) * h;
    const quad::Options opts{1e-15, 1e-12, 600, 4};
    for (int j = 0; j <= jmax; ++j) {
        auto f = [&](double u) {
            return kernel_smooth(u) * std::pow((u - m * h) / h, j);
        };
        if (m == 0) {
            out[j] = quad::power_endpoint_left(f, 0.0, b, power_sigma, opts).value;
        } else {
            auto full = [&](double u) { return std::pow(u, power_sigma) * f(u); };
            out[j] = quad::gauss_kronrod(full, a, b, opts).value;
        }
    }
}

}  // namespace

namespace detail {

std::vector<double> integral_conv_weights(double g, double lambda, double h, int nlag) {
    const auto& L = lagrange();
    const double norm = 1.0 / gamma_fn(g);
    std::vector<double> w(nlag + 6, 0.0);  // lag index q in [-2, nlag+3]
    std::vector<double> mom(6);
    for (int m = 0; m < nlag; ++m) {
        auto smooth = [&](double u) { return norm * std::exp(-lambda * u); };
        cell_moments(smooth, g - 1.0, h, m, 5, mom.data());
        for (int d = kStencilLo; d <= kStencilHi; ++d) {
            double cmd = 0.0;
            for (int j = 0; j < 6; ++j) cmd += L[d - kStencilLo][j] * mom[j];
            w[m + d + 2] += cmd;
        }
    }
    return w;
}

std::vector<double> marchaud_conv_weights(double alpha, double lambda, double h, int nlag) {
    const auto& L = lagrange();
    const double norm = alpha / gamma_fn(1.0 - alpha);
    std::vector<double> w(nlag + 6, 0.0);
    std::vector<double> mom(7);
    for (int m = 0; m < nlag; ++m) {
        auto smooth = [&](double u) { return norm * std::exp(-lambda * u); };
        if (m == 0) {
            // g(0) = 0 at the interpolation node d = 0, so only moments
            // j >= 1 appear; the kernel power -alpha-1 plus one factor of
            // s = u/h stays integrable
            auto smooth_over_h = [&](double u) { return norm * std::exp(-lambda * u) / h; };
            cell_moments(smooth_over_h, -alpha, h, 0, 5, mom.data() + 1);
            // mom[j] now holds int k(u) (u/h)^(j) du for j = 1..6
            for (int d = kStencilLo; d <= kStencilHi; ++d) {
                if (d == 0) continue;
                double cmd = 0.0;
                for (int j = 1; j < 6; ++j) cmd += L[d - kStencilLo][j] * mom[j];
                w[d + 2] += cmd;
            }
        } else {
            cell_moments(smooth, -alpha - 1.0, h, m, 5, mom.data());
            for (int d = kStencilLo; d <= kStencilHi; ++d) {
                double cmd = 0.0;
                for (int j = 0; j < 6; ++j) cmd += L[d - kStencilLo][j] * mom[j];
                w[m + d + 2] += cmd;
            }
        }
    }
    return w;
}

}  // namespace detail

namespace {

int lag_count(double g, double lambda, double h, int n) {
    const double window = tempered_power_tail_cutoff(g, lambda, 1e-13);
    const int m = static_cast<int>(std::ceil(window / h)) + 1;
    return std::min(m, n + 3);
}

// 1-D convolution along one axis of the row-major field. Plus side reads
// f(x - q h), minus side f(x + q h); weights index q from -2.
void convolve_axis(const Field2D& in, Field2D& out, const std::vector<double>& w,
                   bool along_x, Side side) {
    const int nx = in.grid.nx, ny = in.grid.ny;
    const int nlag = static_cast<int>(w.size()) - 2;
    const int sgn = (side == Side::plus) ? +1 : -1;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double acc = 0.0;
            if (along_x) {
                for (int q = -2; q < nlag; ++q) {
                    const int src = i - sgn * q;
                    if (src < 0 || src >= nx) continue;
                    acc += w[q + 2] * in.at(src, j);
                }
            } else {
                for (int q = -2; q < nlag; ++q) {
                    const int src = j - sgn * q;
                    if (src < 0 || src >= ny) continue;
                    acc += w[q + 2] * in.at(i, src);
                }
            }
            out.at(i, j) = acc;
        }
    }
}

// Marchaud application: (A f)(x) = S f(x) - sum_q V_q f(x -+ q h), with the
// out-of-grid part of the sum replaced by zero extension of f. The f(x)
// coefficient keeps the full kernel mass S so constants map correctly.
void marchaud_axis(const Field2D& in, Field2D& out, const std::vector<double>& w,
                   double total, bool along_x, Side side) {
    const int nx = in.grid.nx, ny = in.grid.ny;
    const int nlag = static_cast<int>(w.size()) - 2;
    const int sgn = (side == Side::plus) ? +1 : -1;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            double acc = 0.0;
            if (along_x) {
                for (int q = -2; q < nlag; ++q) {
                    const int src = i - sgn * q;
                    if (src < 0 || src >= nx) continue;
                    acc += w[q + 2] * in.at(src, j);
                }
            } else {
                for (int q = -2; q < nlag; ++q) {
                    const int src = j - sgn * q;
                    if (src < 0 || src >= ny) continue;
                    acc += w[q + 2] * in.at(i, src);
                }
            }
            out.at(i, j) = total * in.at(i, j) - acc;
        }
    }
}

struct PaddedPlan {
    int nx, ny;        // padded sizes
    int offx, offy;    // embedding offset of the original grid
};

PaddedPlan plan_padding(const Grid2D& g, double window_x, double window_y) {
    const int mx = static_cast<int>(std::ceil(window_x / g.dx)) + 3;
    const int my = static_cast<int>(std::ceil(window_y / g.dy)) + 3;
    PaddedPlan p;
    p.nx = fft::next_fast_size(g.nx + 2 * mx);
    p.ny = fft::next_fast_size(g.ny + 2 * my);
    p.offx = mx;
    p.offy = my;
    return p;
}

Field2D apply_multiplier(const FracOrder& order, Side side, const Field2D& f, double sign_alpha,
                         const char* what) {
    order.validate();
    f.grid.validate();
    if (f.values.empty()) throw std::invalid_argument("apply_multiplier: empty field");

    const double wx = tempered_power_tail_cutoff(order.alpha1, order.lambda1, 1e-12);
    const double wy = tempered_power_tail_cutoff(order.alpha2, order.lambda2, 1e-12);
    const PaddedPlan pp = plan_padding(f.grid, wx, wy);

    std::vector<std::complex<double>> buf(static_cast<std::size_t>(pp.nx) * pp.ny, 0.0);
    for (int i = 0; i < f.grid.nx; ++i)
        for (int j = 0; j < f.grid.ny; ++j)
            buf[static_cast<std::size_t>(i + pp.offx) * pp.ny + (j + pp.offy)] = f.at(i, j);

    fft::forward2d(buf.data(), pp.nx, pp.ny);

    const int s = (side == Side::plus) ? +1 : -1;
    const double e1 = sign_alpha * order.alpha1;
    const double e2 = sign_alpha * order.alpha2;
    std::vector<std::complex<double>> mx(pp.nx), my(pp.ny);
    for (int m = 0; m < pp.nx; ++m)
        mx[m] = std::pow(std::complex<double>(order.lambda1, s * fft::dft_frequency(m, pp.nx, f.grid.dx)), e1);
    for (int m = 0; m < pp.ny; ++m)
        my[m] = std::pow(std::complex<double>(order.lambda2, s * fft::dft_frequency(m, pp.ny, f.grid.dy)), e2);
    for (int i = 0; i < pp.nx; ++i) {
        const std::complex<double> cx = mx[i];
        std::complex<double>* row = buf.data() + static_cast<std::size_t>(i) * pp.ny;
        for (int j = 0; j < pp.ny; ++j) row[j] *= cx * my[j];
    }

    fft::inverse2d(buf.data(), pp.nx, pp.ny);

    Field2D out(f.grid);
    double re2 = 0.0, im2 = 0.0;
    for (int i = 0; i < f.grid.nx; ++i) {
        for (int j = 0; j < f.grid.ny; ++j) {
            const auto v = buf[static_cast<std::size_t>(i + pp.offx) * pp.ny + (j + pp.offy)];
            out.at(i, j) = v.real();
            re2 += v.real() * v.real();
            im2 += v.imag() * v.imag();
        }
    }
    if (im2 > 1e-18 * re2 && re2 > 0.0) {
        throw AliasingError(std::string(what) +
                            ": imaginary residue above 1e-9 of the real norm; "
                            "grid too small for the kernel's spread");
    }
    return out;
}

}  // namespace

Field2D frac_integral(const FracOrder& order, Side side, const Field2D& f) {
    order.validate();
    f.grid.validate();
    if (f.values.empty()) throw std::invalid_argument("frac_integral: empty field");
    const auto wx = detail::integral_conv_weights(order.alpha1, order.lambda1, f.grid.dx,
                                                  lag_count(order.alpha1, order.lambda1, f.grid.dx, f.grid.nx));
    const auto wy = detail::integral_conv_weights(order.alpha2, order.lambda2, f.grid.dy,
                                                  lag_count(order.alpha2, order.lambda2, f.grid.dy, f.grid.ny));
    Field2D tmp(f.grid), out(f.grid);
    convolve_axis(f, tmp, wx, true, side);
    convolve_axis(tmp, out, wy, false, side);
    return out;
}

Field2D frac_integral_fourier(const FracOrder& order, Side side, const Field2D& f) {
    return apply_multiplier(order, side, f, -1.0, "frac_integral_fourier");
}

Field2D frac_derivative_fourier(const FracOrder& order, Side side, const Field2D& f) {
    return apply_multiplier(order, side, f, +1.0, "frac_derivative_fourier");
}

Field2D frac_derivative_pointwise(const FracOrder& order, Side side, const Field2D& f) {
    order.validate_derivative_range();
    f.grid.validate();
    const double la1 = std::pow(order.lambda1, order.alpha1);
    const double la2 = std::pow(order.lambda2, order.alpha2);

    const int nlx = lag_count(1.0 - order.alpha1, order.lambda1, f.grid.dx, f.grid.nx);
    const int nly = lag_count(1.0 - order.alpha2, order.lambda2, f.grid.dy, f.grid.ny);
    const auto vx = detail::marchaud_conv_weights(order.alpha1, order.lambda1, f.grid.dx, nlx);
    const auto vy = detail::marchaud_conv_weights(order.alpha2, order.lambda2, f.grid.dy, nly);
    // the tempered Marchaud form maps constants to ((lambda+..)^a - lambda^a)
    // of them; its f(x) coefficient is the full kernel mass
    double sx = 0.0, sy = 0.0;
    for (double v : vx) sx += v;
    for (double v : vy) sy += v;

    Field2D ax(f.grid), ay(f.grid), axy(f.grid);
    marchaud_axis(f, ax, vx, sx, true, side);
    marchaud_axis(f, ay, vy, sy, false, side);
    marchaud_axis(ax, axy, vy, sy, false, side);

    Field2D out(f.grid);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = la1 * la2 * f.values[i] + la2 * ax.values[i] + la1 * ay.values[i] +
                        axy.values[i];
    }
    return out;
}

namespace {

// Shared spectral quadrature: pads the field so the frequency spacing
// resolves the weight's pole scale, then sums weight * |F|^2 terms.
struct SpectralSum {
    const Grid2D grid;
    int nx, ny, offx, offy;
    std::vector<std::complex<double>> fa, fb;

    SpectralSum(const Field2D& f, const Field2D& g, double lambda1, double lambda2)
        : grid(f.grid) {
        if (!f.grid.same_layout(g.grid))
            throw GridMismatchError("spectral inner product: fields on different grids");
        const double want_wx = std::max(0.0, 32.0 / lambda1 - grid.nx * grid.dx);
        const double want_wy = std::max(0.0, 32.0 / lambda2 - grid.ny * grid.dy);
        const int mx = static_cast<int>(std::ceil(0.5 * want_wx / grid.dx));
        const int my = static_cast<int>(std::ceil(0.5 * want_wy / grid.dy));
        nx = fft::next_fast_size(grid.nx + 2 * mx);
        ny = fft::next_fast_size(grid.ny + 2 * my);
        offx = mx;
        offy = my;
        fa.assign(static_cast<std::size_t>(nx) * ny, 0.0);
        fb.assign(static_cast<std::size_t>(nx) * ny, 0.0);
        for (int i = 0; i < grid.nx; ++i) {
            for (int j = 0; j < grid.ny; ++j) {
                fa[static_cast<std::size_t>(i + offx) * ny + (j + offy)] = f.at(i, j);
                fb[static_cast<std::size_t>(i + offx) * ny + (j + offy)] = g.at(i, j);
            }
        }
        fft::forward2d(fa.data(), nx, ny);
        fft::forward2d(fb.data(), nx, ny);
    }

    /// sum over bins of weight(xi, omega) * F[f] conj(F[g]) * dxi domega / (2 pi)^2,
    /// with F approximated by h * DFT (the grid-origin phases cancel).
    std::complex<double> accumulate(const std::function<double(double, double)>& weight) const {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double xi = fft::dft_frequency(i, nx, grid.dx);
            for (int j = 0; j < ny; ++j) {
                const double om = fft::dft_frequency(j, ny, grid.dy);
                const std::size_t idx = static_cast<std::size_t>(i) * ny + j;
                acc += weight(xi, om) * fa[idx] * std::conj(fb[idx]);
            }
        }
        // h^2 from each transform, dxi domega/(2pi)^2 = 1/(N h)^2 per axis
        const double scale = (grid.dx * grid.dx / nx) * (grid.dy * grid.dy / ny) /
                             (grid.dx * grid.dy);
        return acc * scale;
    }
};

}  // namespace

double sobolev_norm(const SobolevParams& params, const Field2D& f) {
    params.validate();
    f.validate_finite();
    const auto& o = params.order;
    SpectralSum s(f, f, o.lambda1, o.lambda2);
    const auto acc = s.accumulate([&](double xi, double om) {
        return std::pow(o.lambda1 * o.lambda1 + xi * xi, o.alpha1) *
               std::pow(o.lambda2 * o.lambda2 + om * om, o.alpha2);
    });
    return std::sqrt(std::abs(acc.real()));
}

double inner_product_H1(const FieldParams& params, const Field2D& f, const Field2D& g) {
    const FracOrder beta = beta_of(params);
    if (!f.grid.same_layout(g.grid))
        throw GridMismatchError("inner_product_H1: fields on different grids");

    // I^beta_- spreads toward -inf on both axes; extend the grid there
    const double wx = tempered_power_tail_cutoff(beta.alpha1, beta.lambda1, 1e-12);
    const double wy = tempered_power_tail_cutoff(beta.alpha2, beta.lambda2, 1e-12);
    const int mx = static_cast<int>(std::ceil(wx / f.grid.dx)) + 3;
    const int my = static_cast<int>(std::ceil(wy / f.grid.dy)) + 3;
    Grid2D pg = f.grid;
    pg.nx += mx + 3;
    pg.ny += my + 3;
    pg.x0 -= mx * pg.dx;
    pg.y0 -= my * pg.dy;
    Field2D fp(pg), gp(pg);
    for (int i = 0; i < f.grid.nx; ++i) {
        for (int j = 0; j < f.grid.ny; ++j) {
            fp.at(i + mx, j + my) = f.at(i, j);
            gp.at(i + mx, j + my) = g.at(i, j);
        }
    }
    const Field2D F = frac_integral(beta, Side::minus, fp);
    const Field2D G = frac_integral(beta, Side::minus, gp);
    const double gg = gamma_fn(params.H1 - 0.5) * gamma_fn(params.H2 - 0.5);
    return gg * gg * l2_inner(F, G);
}

double inner_product_H2(const FieldParams& params, const Field2D& f, const Field2D& g) {
    params.validate();
    if (params.k != 1)
        throw UnsupportedRangeError("inner_product_H2: defined for the order-one field");
    if (!f.grid.same_layout(g.grid))
        throw GridMismatchError("inner_product_H2: fields on different grids");
    const double b1 = params.H1 - 0.5, b2 = params.H2 - 0.5;
    SpectralSum s(f, g, params.lambda1, params.lambda2);
    const auto acc = s.accumulate([&](double xi, double om) {
        return std::pow(params.lambda1 * params.lambda1 + xi * xi, -b1) *
               std::pow(params.lambda2 * params.lambda2 + om * om, -b2);
    });
    if (std::abs(acc.imag()) > 1e-10 * std::max(1e-300, std::abs(acc.real())))
        throw AliasingError("inner_product_H2: imaginary part above threshold");
    const double gg = gamma_fn(b1) * gamma_fn(b2);
    return gg * gg * acc.real();
}

}
