#include "nodalsplit/field.hpp"

#include <algorithm>
#include <cmath>

namespace nodalsplit {

GridSpec make_grid(int k, int ny) {
    GridSpec g;
    g.N = aspect_from_k(k);
    g.ny = ny;
    g.nx = std::max(8, static_cast<int>(std::llround(ny * std::sqrt((static_cast<double>(k) * k + 4.0) / 5.0))));
    return g;
}

GridSpec auto_grid(int k, double eta_min) {
    const int ny = std::max(256, static_cast<int>(std::ceil(8.0 / std::sqrt(std::max(eta_min, 1e-12)))));
    return make_grid(k, ny);
}

double Field2D::max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
}

double Field2D::interp(double x, double y) const {
    const double hx = grid.hx(), hy = grid.hy();
    double fx = std::clamp(x / hx, 0.0, static_cast<double>(grid.nx));
    double fy = std::clamp(y / hy, 0.0, static_cast<double>(grid.ny));
    int ix = std::min(static_cast<int>(fx), grid.nx - 1);
    int iy = std::min(static_cast<int>(fy), grid.ny - 1);
    const double tx = fx - ix, ty = fy - iy;
    return at(ix, iy) * (1 - tx) * (1 - ty) + at(ix + 1, iy) * tx * (1 - ty) +
           at(ix, iy + 1) * (1 - tx) * ty + at(ix + 1, iy + 1) * tx * ty;
}

double Field2D::interp_near_left(double x, int iy) const {
    // Lagrange through nodes 0, 1, 2 of the row; node 0 is Dirichlet zero
    const double t = x / grid.hx();
    const double u1 = at(1, iy), u2 = at(2, iy);
    return -t * (t - 2.0) * u1 + 0.5 * t * (t - 1.0) * u2;
}

Field2D sample_field(const GridSpec& g, const std::function<double(double, double)>& f) {
    Field2D out(g);
    for (int ix = 0; ix <= g.nx; ++ix) {
        const double x = out.x_of(ix);
        for (int iy = 0; iy <= g.ny; ++iy) out.at(ix, iy) = f(x, out.y_of(iy));
    }
    return out;
}

double physical_x(const DomainSpec& spec, double phi_at_y, double x_ref) {
    const double ep = spec.eta * phi_at_y;
    return x_ref / spec.N * (spec.N + ep) - ep;
}

} // namespace nodalsplit
