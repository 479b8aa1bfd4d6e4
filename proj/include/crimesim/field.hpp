#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace crimesim {

/// Node-centred square grid on [0, L]^2.
struct Grid {
    std::size_t n = 0;  // nodes per axis
    double h = 0.0;

    Grid() = default;
    Grid(std::size_t nodes_per_axis, double spacing) : n(nodes_per_axis), h(spacing) {
        if (n < 2 || !(h > 0)) throw std::invalid_argument("grid needs n >= 2 and h > 0");
    }

    static Grid square(double L, double h) {
        if (!(L > 0) || !(h > 0)) throw std::invalid_argument("grid needs L > 0 and h > 0");
        auto cells = static_cast<std::size_t>(std::llround(L / h));
        if (cells < 1 || std::abs(double(cells) * h - L) > 1e-9 * L)
            throw std::invalid_argument("L must be an integer multiple of h");
        return Grid(cells + 1, h);
    }

    double side() const { return double(n - 1) * h; }
    std::size_t size() const { return n * n; }
    std::size_t index(std::size_t ix, std::size_t iy) const { return iy * n + ix; }
    double x(std::size_t ix) const { return double(ix) * h; }
    double y(std::size_t iy) const { return double(iy) * h; }

    /// Integration weight of node i for a bilinear interpolant (row sums of the mass matrix).
    double weight(std::size_t ix, std::size_t iy) const {
        double wx = (ix == 0 || ix == n - 1) ? 0.5 : 1.0;
        double wy = (iy == 0 || iy == n - 1) ? 0.5 : 1.0;
        return wx * wy * h * h;
    }

    bool operator==(const Grid&) const = default;
};

/// One scalar per node, row-major (x fastest).
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
    }

    std::size_t nx() const { return grid.n; }
    std::size_t ny() const { return grid.n; }
    std::size_t size() const { return values.size(); }
    double& operator()(std::size_t ix, std::size_t iy) { return values[grid.index(ix, iy)]; }
    double operator()(std::size_t ix, std::size_t iy) const { return values[grid.index(ix, iy)]; }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double min() const { return *std::min_element(values.begin(), values.end()); }
    double max() const { return *std::max_element(values.begin(), values.end()); }
    bool finite() const {
        return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
    }

    /// Integral of the bilinear interpolant.
    double integral() const {
        double s = 0.0;
        for (std::size_t iy = 0; iy < grid.n; ++iy)
            for (std::size_t ix = 0; ix < grid.n; ++ix)
                s += grid.weight(ix, iy) * values[grid.index(ix, iy)];
        return s;
    }
};

/// Mean over the domain using the mass-matrix quadrature (sum_ij M_ij f_j / |Omega|).
inline double spatial_average(const ScalarField& f) {
    const double L = f.grid.side();
    return f.integral() / (L * L);
}

}  // namespace crimesim
