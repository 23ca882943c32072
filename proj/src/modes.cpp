#include "nodalsplit/modes.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace nodalsplit {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

std::vector<ModeProfile> extract_modes(const Field2D& field, double eigenvalue, int j_max) {
    const GridSpec& g = field.grid;
    if (j_max > g.ny / 4)
        throw AliasingError("j_max=" + std::to_string(j_max) + " exceeds ny/4 Nyquist margin");
    const double hy = g.hy();
    std::vector<ModeProfile> modes;
    modes.reserve(static_cast<size_t>(j_max));
    for (int j = 1; j <= j_max; ++j) {
        ModeProfile m;
        m.j = j;
        m.oscillatory = (j <= 2);
        m.mu_j = std::sqrt(std::abs(eigenvalue - kPi * kPi * j * j));
        m.values.resize(static_cast<size_t>(g.nx) + 1, 0.0);
        std::vector<double> sj(static_cast<size_t>(g.ny) + 1);
        for (int iy = 0; iy <= g.ny; ++iy) sj[static_cast<size_t>(iy)] = std::sin(j * kPi * iy * hy);
        for (int ix = 0; ix <= g.nx; ++ix) {
            double acc = 0.0;  // trapezoid; boundary rows are zero
            for (int iy = 1; iy < g.ny; ++iy) acc += field.at(ix, iy) * sj[static_cast<size_t>(iy)];
            m.values[static_cast<size_t>(ix)] = 2.0 * hy * acc;
        }
        modes.push_back(std::move(m));
    }
    return modes;
}

namespace {

// sine coefficient of a {cos, sin} least-squares fit over the window
double fit_sine_coefficient(const ModeProfile& m, const GridSpec& g) {
    std::vector<int> cols;
    for (int ix = 0; ix <= g.nx; ++ix) {
        const double x = ix * g.hx();
        if (x >= 0.1 * g.N && x <= 0.9 * g.N) cols.push_back(ix);
    }
    Eigen::MatrixXd A(static_cast<Eigen::Index>(cols.size()), 2);
    Eigen::VectorXd b(static_cast<Eigen::Index>(cols.size()));
    for (size_t r = 0; r < cols.size(); ++r) {
        const double x = cols[r] * g.hx();
        A(static_cast<Eigen::Index>(r), 0) = std::cos(m.mu_j * x);
        A(static_cast<Eigen::Index>(r), 1) = std::sin(m.mu_j * x);
        b(static_cast<Eigen::Index>(r)) = m.values[static_cast<size_t>(cols[r])];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cond = svd.singularValues()(0) / svd.singularValues()(1);
    if (!(cond < 1e8)) throw FitError("ill-conditioned amplitude fit, cond=" + std::to_string(cond));
    Eigen::Vector2d coef = svd.solve(b);
    return coef(1);
}

} // namespace

ModeSummary fit_amplitudes(const std::vector<ModeProfile>& modes, const Field2D& field,
                           const DomainSpec& spec, const BoundaryFn& phi) {
    ModeSummary s;
    if (modes.size() < 2) throw FitError("need modes 1 and 2");
    const GridSpec& g = field.grid;
    s.a1 = fit_sine_coefficient(modes[0], g);
    s.a2 = fit_sine_coefficient(modes[1], g);

    // v_j along the physical x=0 line: quadratic x-interpolation of the
    // field at x_ref(y) = N eta phi(y) / (N + eta phi(y)), then the same
    // trapezoid transform as extract_modes
    const double hy = g.hy();
    std::vector<double> line(static_cast<size_t>(g.ny) + 1, 0.0);
    for (int iy = 1; iy < g.ny; ++iy) {
        const double y = iy * hy;
        const double ep = spec.eta * phi.eval(y);
        const double xr = spec.N * ep / (spec.N + ep);
        line[static_cast<size_t>(iy)] = field.interp_near_left(xr, iy);
    }
    s.v_at_0.resize(modes.size(), 0.0);
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        const int j = modes[mi].j;
        double acc = 0.0;
        for (int iy = 1; iy < g.ny; ++iy)
            acc += line[static_cast<size_t>(iy)] * std::sin(j * kPi * iy * hy);
        s.v_at_0[mi] = 2.0 * hy * acc;
    }
    for (size_t mi = 0; mi < modes.size(); ++mi)
        if (modes[mi].j >= 3) s.error_tail += s.v_at_0[mi] * s.v_at_0[mi];
    return s;
}

std::vector<CoefficientRow> boundary_coefficients_check(const ModeSummary& summary,
                                                        const BoundaryFn& phi,
                                                        const DomainSpec& spec, double c1,
                                                        double c2, int j_max) {
    std::vector<CoefficientRow> rows;
    const double pref = 4.0 * kPi * spec.eta / std::pow(spec.N, 1.5);
    for (int j = 1; j <= j_max && j <= static_cast<int>(summary.v_at_0.size()); ++j) {
        CoefficientRow r;
        r.j = j;
        r.measured = summary.v_at_0[static_cast<size_t>(j - 1)];
        r.predicted = pref * (spec.k * c1 * quad_weighted(phi, 1, j) +
                              2.0 * c2 * quad_weighted(phi, 2, j));
        r.predicted_near_zero = std::abs(r.predicted) < 1e-14;
        r.ratio = r.predicted_near_zero ? 0.0 : r.measured / r.predicted;
        rows.push_back(r);
    }
    return rows;
}

ErrorFieldResult error_field(const Field2D& field, const std::vector<ModeProfile>& modes,
                             const ModeSummary& summary) {
    if (modes.size() < 2) throw FitError("need modes 1 and 2");
    const GridSpec& g = field.grid;
    ErrorFieldResult out;
    out.E = Field2D(g);
    out.error_tail = summary.error_tail;
    const double hy = g.hy();
    for (int ix = 0; ix <= g.nx; ++ix) {
        const double v1 = modes[0].values[static_cast<size_t>(ix)];
        const double v2 = modes[1].values[static_cast<size_t>(ix)];
        const double x = ix * g.hx();
        const bool mid = (x >= 0.25 * g.N && x <= 0.75 * g.N);
        for (int iy = 0; iy <= g.ny; ++iy) {
            const double y = iy * hy;
            const double e = field.at(ix, iy) - v1 * std::sin(kPi * y) - v2 * std::sin(2.0 * kPi * y);
            out.E.at(ix, iy) = e;
            out.error_sup = std::max(out.error_sup, std::abs(e));
            if (mid) out.error_sup_midstrip = std::max(out.error_sup_midstrip, std::abs(e));
        }
    }
    return out;
}

} // namespace nodalsplit
