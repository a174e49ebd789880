#include "thfield/wiener.hpp"

#include <cmath>
#include <sstream>

#include "thfield/errors.hpp"
#include "thfield/tfcalc.hpp"

namespace thfield {

double integrate_elementary(const FieldParams& params, const ElementaryFunction& f,
                            const SamplePath& path) {
    params.validate();
    f.validate();
    if (params.k != 1)
        throw UnsupportedRangeError("integrate_elementary: Wiener integration is order-one");
    double acc = 0.0;
    for (const auto& tm : f.terms) {
        acc += tm.coeff * (path.value_at(tm.t_hi, tm.s_hi) - path.value_at(tm.t_hi, tm.s_lo) -
                           path.value_at(tm.t_lo, tm.s_hi) + path.value_at(tm.t_lo, tm.s_lo));
    }
    return acc;
}

namespace {

TimeQuadrature quadrature_from_node_grid(const Grid2D& g) {
    g.validate();
    // nodes sit at (i + 1/2) * step: the origin must be half a step
    if (std::abs(g.x0 - 0.5 * g.dx) > 1e-9 * g.dx || std::abs(g.y0 - 0.5 * g.dy) > 1e-9 * g.dy)
        throw GridMismatchError(
            "integrate_via_white_noise: field must live on the midpoint lattice of the "
            "time quadrature (origin at half a step)");
    TimeQuadrature q;
    q.da = g.dx;
    q.db = g.dy;
    q.nqa = g.nx;
    q.nqb = g.ny;
    return q;
}

}  // namespace

double integrate_via_white_noise(const FieldParams& params, const Field2D& f,
                                 const NoiseGrid& noise) {
    params.validate();
    if (params.k != 1)
        throw UnsupportedRangeError("integrate_via_white_noise: Wiener integration is order-one");
    const TimeQuadrature quad = quadrature_from_node_grid(f.grid);
    const MovingAverageScheme scheme(params, quad, noise.grid);
    const std::vector<double> w = scheme.white_noise_weights(f);
    double acc = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) acc += w[c] * noise.values[c];
    return acc;
}

IsometryReport isometry_report(const FieldParams& params, const std::vector<Field2D>& fs,
                               const Grid2D& noise_grid, int samples, const SeedSpec& seed,
                               double discretization_budget) {
    params.validate();
    if (params.k != 1)
        throw UnsupportedRangeError("isometry_report: Wiener integration is order-one");
    IsometryReport rep;
    rep.samples = samples;
    rep.discretization_budget = discretization_budget;
    if (fs.empty()) return rep;

    const TimeQuadrature quad = quadrature_from_node_grid(fs.front().grid);
    const MovingAverageScheme scheme(params, quad, noise_grid);
    const int nf = static_cast<int>(fs.size());
    std::vector<std::vector<double>> weights(nf);
    for (int i = 0; i < nf; ++i) {
        if (!fs[i].grid.same_layout(fs.front().grid))
            throw GridMismatchError("isometry_report: all fields must share one grid");
        weights[i] = scheme.white_noise_weights(fs[i]);
    }

    // empirical second moments of the white-noise integrals
    std::vector<double> mean(nf, 0.0);
    std::vector<double> m2(static_cast<std::size_t>(nf) * nf, 0.0);
    std::vector<double> vals(nf);
    for (int n = 0; n < samples; ++n) {
        const NoiseGrid noise = make_noise_grid(noise_grid, {seed.seed, seed.stream + n});
        for (int i = 0; i < nf; ++i) {
            double acc = 0.0;
            const auto& w = weights[i];
            for (std::size_t c = 0; c < w.size(); ++c) acc += w[c] * noise.values[c];
            vals[i] = acc;
            mean[i] += acc;
        }
        for (int i = 0; i < nf; ++i)
            for (int j = i; j < nf; ++j) m2[static_cast<std::size_t>(i) * nf + j] += vals[i] * vals[j];
    }
    for (int i = 0; i < nf; ++i) mean[i] /= samples;
    for (int i = 0; i < nf; ++i)
        for (int j = i; j < nf; ++j) m2[static_cast<std::size_t>(i) * nf + j] /= samples;

    for (int i = 0; i < nf; ++i) {
        for (int j = i; j < nf; ++j) {
            IsometryReport::Row row;
            row.i = i;
            row.j = j;
            row.h1 = inner_product_H1(params, fs[i], fs[j]);
            row.h2 = inner_product_H2(params, fs[i], fs[j]);
            row.emp_cov = m2[static_cast<std::size_t>(i) * nf + j] - mean[i] * mean[j];
            const double vi = m2[static_cast<std::size_t>(i) * nf + i] - mean[i] * mean[i];
            const double vj = m2[static_cast<std::size_t>(j) * nf + j] - mean[j] * mean[j];
            row.se = std::sqrt(std::max(0.0, vi * vj + row.emp_cov * row.emp_cov) / samples);
            row.flagged = std::abs(row.emp_cov - row.h1) >
                          rep.band_se * row.se + discretization_budget * std::max(1.0, std::abs(row.h1));
            rep.rows.push_back(row);
        }
    }
    return rep;
}

std::string IsometryReport::to_csv() const {
    std::ostringstream os;
    os << "i,j,h1,h2,emp_cov,se,flagged\n";
    os.precision(15);
    for (const auto& r : rows)
        os << r.i << ',' << r.j << ',' << r.h1 << ',' << r.h2 << ',' << r.emp_cov << ',' << r.se
           << ',' << (r.flagged ? 1 : 0) << '\n';
    return os.str();
}

std::string IsometryReport::to_json() const {
    std::ostringstream os;
    os.precision(15);
    os << "{\n  \"samples\": " << samples << ",\n  \"band_se\": " << band_se
       << ",\n  \"discretization_budget\": " << discretization_budget << ",\n  \"rows\": [\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        os << "    {\"i\": " << row.i << ", \"j\": " << row.j << ", \"h1\": " << row.h1
           << ", \"h2\": " << row.h2 << ", \"emp_cov\": " << row.emp_cov << ", \"se\": " << row.se
           << ", \"flagged\": " << (row.flagged ? "true" : "false") << '}'
           << (r + 1 < rows.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

}
