#pragma once

#include "numeasure/errors.hpp"

#include <vector>

namespace numeasure {

// Inclusive rectangular lattice: nx x ny points with x_i = x0 + i*hx.
struct GridSpec {
    double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
    int nx = 2, ny = 2;

    void validate() const {
        if (nx < 2 || ny < 2) throw PreconditionError("grid spec: nx, ny must be >= 2");
        if (!(x1 > x0) || !(y1 > y0)) throw PreconditionError("grid spec: empty ranges");
    }
    double hx() const { return (x1 - x0) / (nx - 1); }
    double hy() const { return (y1 - y0) / (ny - 1); }
    double x(int i) const { return x0 + i * hx(); }
    double y(int j) const { return y0 + j * hy(); }
    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * ny + j; }

    // Trapezoid weight of lattice point (i, j), excluding the hx*hy factor.
    double trapezoid_weight(int i, int j) const {
        const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
        const double wy = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
        return wx * wy;
    }
};

} // namespace numeasure
