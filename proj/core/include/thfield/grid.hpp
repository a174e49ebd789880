#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace thfield {

/// Uniform rectangular lattice. Node (i,j) sits at (x0 + i*dx, y0 + j*dy);
/// fields over the grid are stored row-major with index i*ny + j.
struct Grid2D {
    double x0 = 0.0;
    double y0 = 0.0;
    double dx = 1.0;
    double dy = 1.0;
    int nx = 1;
    int ny = 1;

    void validate() const {
        if (!(dx > 0.0) || !(dy > 0.0))
            throw std::invalid_argument("Grid2D: spacings must be positive");
        if (nx < 1 || ny < 1)
            throw std::invalid_argument("Grid2D: counts must be >= 1");
        if (!std::isfinite(x0) || !std::isfinite(y0))
            throw std::invalid_argument("Grid2D: non-finite origin");
    }

    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double node_x(int i) const { return x0 + i * dx; }
    double node_y(int j) const { return y0 + j * dy; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(ny) + static_cast<std::size_t>(j);
    }
    double cell_area() const { return dx * dy; }

    bool same_layout(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && x0 == o.x0 && y0 == o.y0 && dx == o.dx && dy == o.dy;
    }
};

/// Real values tabulated on a Grid2D, row-major.
struct Field2D {
    Grid2D grid;
    std::vector<double> values;

    Field2D() = default;
    explicit Field2D(const Grid2D& g) : grid(g), values(g.size(), 0.0) { g.validate(); }
    Field2D(const Grid2D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        g.validate();
        if (values.size() != g.size())
            throw std::invalid_argument("Field2D: value count does not match grid");
    }

    double& at(int i, int j) { return values[grid.index(i, j)]; }
    double at(int i, int j) const { return values[grid.index(i, j)]; }

    void validate_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("Field2D: non-finite entry");
    }
};

/// Tabulate f(x, y) at the grid nodes.
template <class F>
Field2D tabulate(const Grid2D& g, F&& f) {
    Field2D out(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            out.at(i, j) = f(g.node_x(i), g.node_y(j));
    return out;
}

inline double l2_norm(const Field2D& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * f.grid.cell_area());
}

inline double l2_inner(const Field2D& f, const Field2D& g) {
    if (!f.grid.same_layout(g.grid))
        throw std::invalid_argument("l2_inner: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
    return s * f.grid.cell_area();
}

}
