#include "nodalsplit/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nodalsplit/nodal.hpp"

namespace nodalsplit {

namespace {
constexpr double kPi = std::numbers::pi;

double clamp_arccos(double arg) { return std::acos(std::clamp(arg, -1.0, 1.0)) / kPi; }
} // namespace

VariationMatrix variation_matrix(const BoundaryFn& phi, int k) {
    if (k < 3) throw std::domain_error("k must be >= 3");
    const auto rep = check_admissible(phi);
    if (!rep.admissible) throw AdmissibilityError("phi is not admissible");
    const double N = aspect_from_k(k);
    const double pref = 4.0 * kPi * kPi / (N * N * N);
    VariationMatrix d;
    d.a = pref * k * k * quad_weighted(phi, 1, 1);
    d.b = pref * 2.0 * k * rep.lambda_phi;
    d.c = pref * 4.0 * quad_weighted(phi, 2, 2);
    return d;
}

std::pair<double, double> branch_slopes(const VariationMatrix& d) {
    const double disc = std::sqrt((d.a - d.c) * (d.a - d.c) + 4.0 * d.b * d.b);
    const double mu_dot = -0.5 * ((d.a + d.c) - disc);
    const double gamma_dot = -0.5 * ((d.a + d.c) + disc);
    return {mu_dot, gamma_dot};
}

std::pair<double, double> coefficients(const VariationMatrix& d) {
    if (d.b == 0.0)
        throw DegenerateDirectionError("b = 0: eigenvectors undefined up to rotation");
    const double mu_dot = branch_slopes(d).first;
    // (D + mu_dot I) c = 0  =>  c parallel to (b, -(a + mu_dot))
    double c1 = d.b, c2 = -(d.a + mu_dot);
    const double nrm = std::hypot(c1, c2);
    c1 /= nrm;
    c2 /= nrm;
    if (c2 < 0.0) { c1 = -c1; c2 = -c2; }
    return {c1, c2};
}

VariationResult variation_analysis(const BoundaryFn& phi, int k) {
    VariationResult r;
    r.d = variation_matrix(phi, k);
    std::tie(r.mu_dot, r.gamma_dot) = branch_slopes(r.d);
    std::tie(r.c1, r.c2) = coefficients(r.d);
    r.lambda_phi = lambda_phi(phi);
    return r;
}

double coefficient_variation(const BoundaryFn& phi, int k, double c1, double c2, int j) {
    const double N = aspect_from_k(k);
    const double s = 4.0 * kPi / std::pow(N, 1.5);
    return s * (2.0 * c2 * quad_weighted(phi, 2, j) + k * c1 * quad_weighted(phi, 1, j));
}

double sin_ratio(int k, double N, double x) {
    const double t = x / N;
    const double window = 1e-9;
    if (std::abs(t) < window) return 0.5 * k;
    if (std::abs(t - 1.0) < window) return 0.5 * k * (k % 2 == 0 ? 1.0 : -1.0);
    if (std::abs(t - 0.5) < window) {
        if (k % 2 == 0) {
            const double ck = (k % 4 == 0) ? 1.0 : -1.0;  // cos(k pi / 2)
            return -0.5 * k * ck;
        }
        return std::numeric_limits<double>::infinity();
    }
    return std::sin(k * kPi * t) / std::sin(2.0 * kPi * t);
}

std::optional<double> f_v(const DomainSpec& spec, double c1, double c2, double x) {
    const double arg = -(c1 / (2.0 * c2)) * sin_ratio(spec.k, spec.N, x);
    if (!(std::abs(arg) <= 1.0 + 1e-12)) return std::nullopt;
    return clamp_arccos(arg);
}

std::optional<double> f_w(const DomainSpec& spec, double c1, double c2, double x) {
    const double arg = (c2 / (2.0 * c1)) * sin_ratio(spec.k, spec.N, x);
    if (!(std::abs(arg) <= 1.0 + 1e-12)) return std::nullopt;
    return clamp_arccos(arg);
}

double crossing_height(const DomainSpec& spec, double c1, double c2) {
    if (spec.k % 2 != 0) throw ParityError("crossing height requires even k");
    const double ck = (spec.k % 4 == 0) ? 1.0 : -1.0;
    return clamp_arccos(ck * spec.k * c1 / (4.0 * c2));
}

Interval mk_interval(int k, double N) {
    if (k % 2 == 1) {
        // interval between consecutive zeros of sin(k pi x/N) just past the
        // midline, where the first v-side extremum forms
        return {N * (0.5 + 0.5 / k), N * (0.5 + 1.5 / k)};
    }
    switch (k % 4) {
        case 0: return {N * (0.75 - 1.0 / k), N * 0.75};
        default: return {N * (0.75 - 0.5 / k), N * (0.75 + 0.5 / k)};  // k = 2 mod 4
    }
}

double m_k(int k, double N) {
    const Interval I = mk_interval(k, N);
    auto ratio2 = [&](double x) {
        const double r = sin_ratio(k, N, x);
        return r * r;
    };
    // bracket with 64 samples, then golden-section on the winning bracket
    const int ns = 64;
    double best = 0.0;
    int ibest = 0;
    for (int i = 0; i <= ns; ++i) {
        const double x = I.lo + (I.hi - I.lo) * i / ns;
        const double v = ratio2(x);
        if (v > best) { best = v; ibest = i; }
    }
    double lo = I.lo + (I.hi - I.lo) * std::max(0, ibest - 1) / ns;
    double hi = I.lo + (I.hi - I.lo) * std::min(ns, ibest + 1) / ns;
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = ratio2(x1), f2 = ratio2(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-13; ++it) {
        if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + invphi * (hi - lo); f2 = ratio2(x2);
        } else {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - invphi * (hi - lo); f1 = ratio2(x1);
        }
    }
    return std::max({best, f1, f2});
}

Field2D sample_v0(const DomainSpec& spec, double c1, double c2, const GridSpec& g) {
    return sample_field(g, [&](double x, double y) {
        return c1 * eigenfunction_eval(spec, {spec.k, 1}, x, y) +
               c2 * eigenfunction_eval(spec, {2, 2}, x, y);
    });
}

Field2D sample_w0(const DomainSpec& spec, double c1, double c2, const GridSpec& g) {
    return sample_field(g, [&](double x, double y) {
        return -c2 * eigenfunction_eval(spec, {spec.k, 1}, x, y) +
               c1 * eigenfunction_eval(spec, {2, 2}, x, y);
    });
}

NodalPrediction predict_nodal(const DomainSpec& spec, const BoundaryFn& phi) {
    NodalPrediction p;
    const auto var = variation_analysis(phi, spec.k);
    p.even = (spec.k % 2 == 0);
    if (p.even) p.y_bar = crossing_height(spec, var.c1, var.c2);
    p.f_v_at_0 = f_v(spec, var.c1, var.c2, 0.0).value();
    p.domain_count_v = p.even ? 4 : 3;
    p.m_k = m_k(spec.k, spec.N);

    // flood-fill cross-check on closed-form fields
    GridSpec g;
    g.N = spec.N;
    g.ny = 1024;
    g.nx = static_cast<int>(std::ceil(1024 * spec.N));
    p.grid_count_v = count_domains(sample_v0(spec, var.c1, var.c2, g));
    p.grid_count_w = count_domains(sample_w0(spec, var.c1, var.c2, g));

    const double thr = std::sqrt(p.m_k / (4.0 + p.m_k));
    if (spec.k <= 4) {
        // a nodal curve may hit a corner or vertical side; trust the grid
        p.domain_count_w = p.grid_count_w;
    } else {
        p.domain_count_w = (std::abs(var.c1) <= thr) ? spec.k : spec.k - 2;
    }
    p.w_curve_count = p.domain_count_w - 1;
    p.predictor_consistent =
        p.domain_count_v == p.grid_count_v && p.domain_count_w == p.grid_count_w;
    return p;
}

} // namespace nodalsplit
