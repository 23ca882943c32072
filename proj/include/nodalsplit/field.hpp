#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "nodalsplit/errors.hpp"
#include "nodalsplit/rectangle.hpp"

namespace nodalsplit {

// Nodes (ix, iy), ix in 0..nx (x = ix*hx over [0,N]), iy in 0..ny (y = iy*hy).
// Interior unknowns are ix in 1..nx-1, iy in 1..ny-1.
struct GridSpec {
    int nx = 64;
    int ny = 64;
    double N = 2.0;
    double hx() const { return N / nx; }
    double hy() const { return 1.0 / ny; }
    int unknowns() const { return (nx - 1) * (ny - 1); }
};

// nx chosen so the discrete eigenvalues of the degenerate pair (2,2), (k,1)
// coincide to O(h^4): the O(h^2) truncation shift cancels when
// (hx/hy)^2 = 5 N^2 / (k^2 + 4).  For k = 4 this is a square-cell grid.
GridSpec make_grid(int k, int ny);

// ny = max(256, ceil(8/sqrt(eta_min))) so the expected sqrt(eta) nodal
// splitting stays a fixed multiple of the cell size across a sweep
GridSpec auto_grid(int k, double eta_min);

// Scalar samples over the full node set, boundary included (zero for
// Dirichlet fields). Row of constant ix is contiguous.
struct Field2D {
    GridSpec grid;
    std::vector<double> data;  // (nx+1)*(ny+1), index ix*(ny+1)+iy

    Field2D() = default;
    explicit Field2D(const GridSpec& g)
        : grid(g), data(static_cast<size_t>(g.nx + 1) * (g.ny + 1), 0.0) {}

    double& at(int ix, int iy) { return data[static_cast<size_t>(ix) * (grid.ny + 1) + iy]; }
    double at(int ix, int iy) const { return data[static_cast<size_t>(ix) * (grid.ny + 1) + iy]; }
    double x_of(int ix) const { return ix * grid.hx(); }
    double y_of(int iy) const { return iy * grid.hy(); }

    double max_abs() const;
    // bilinear interpolation; clamps to the domain box
    double interp(double x, double y) const;
    // quadratic (3-node Lagrange in x) interpolation along row iy near x=0
    double interp_near_left(double x, int iy) const;
};

// sample a closed-form function over the grid
Field2D sample_field(const GridSpec& g, const std::function<double(double, double)>& f);

// physical x of a reference point under the rectangle-to-Omega map
// x_phys = (x_ref/N)(N + eta*phi(y)) - eta*phi(y)
double physical_x(const DomainSpec& spec, double phi_at_y, double x_ref);

} // namespace nodalsplit
