#include "nodalsplit/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nodalsplit {

namespace {

constexpr double kPi = std::numbers::pi;

// 20-point Gauss-Legendre nodes/weights on [-1,1] (positive half; mirror for the rest)
constexpr std::array<double, 10> kGlNodes = {
    0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271,
    0.6360536807265150, 0.7463319064601508, 0.8391169718222188, 0.9122344282513259,
    0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kGlWeights = {
    0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766,
    0.1181945319615184, 0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
    0.0406014298003869, 0.0176140071391521};

std::vector<double> expand_binomial(int inner_power, int outer_power) {
    // coefficients of y^inner_power * (1-y)^outer_power
    std::vector<double> c(static_cast<size_t>(inner_power + outer_power + 1), 0.0);
    double binom = 1.0;
    for (int i = 0; i <= outer_power; ++i) {
        c[static_cast<size_t>(inner_power + i)] = ((i % 2) ? -binom : binom);
        binom = binom * (outer_power - i) / (i + 1);
    }
    return c;
}

} // namespace

BoundaryFn BoundaryFn::polynomial(std::vector<double> coeffs, double scale) {
    BoundaryFn f;
    f.coeffs_ = std::move(coeffs);
    f.scale_ = scale;
    while (!f.coeffs_.empty() && f.coeffs_.back() == 0.0) f.coeffs_.pop_back();
    return f;
}

BoundaryFn BoundaryFn::preset(const std::string& name, double scale) {
    if (name == "bump") return bump(scale);
    if (name == "skew24") return skew24(scale);
    if (name == "skew8") return skew8(scale);
    if (name == "zero") return zero();
    throw ConfigError("unknown boundary preset: " + name);
}

BoundaryFn BoundaryFn::bump(double scale) {
    BoundaryFn f = polynomial(expand_binomial(1, 2), scale);
    f.name_ = "bump";
    return f;
}

BoundaryFn BoundaryFn::skew24(double scale) {
    BoundaryFn f = polynomial(expand_binomial(24, 1), scale);
    f.name_ = "skew24";
    return f;
}

BoundaryFn BoundaryFn::skew8(double scale) {
    BoundaryFn f = polynomial(expand_binomial(8, 1), scale);
    f.name_ = "skew8";
    return f;
}

BoundaryFn BoundaryFn::zero() {
    BoundaryFn f;
    f.name_ = "zero";
    return f;
}

double BoundaryFn::eval(double y, int order) const {
    if (order < 0 || order > 5)
        throw std::invalid_argument("unsupported derivative order " + std::to_string(order));
    // differentiate the coefficient vector `order` times, then Horner
    const int deg = degree();
    if (order > deg) return 0.0;
    double acc = 0.0;
    for (int p = deg; p >= order; --p) {
        double fall = 1.0;
        for (int q = 0; q < order; ++q) fall *= (p - q);
        acc = acc * y + coeffs_[static_cast<size_t>(p)] * fall;
    }
    return scale_ * acc;
}

BoundaryFn BoundaryFn::scaled_by(double s) const {
    BoundaryFn f = *this;
    f.scale_ *= s;
    return f;
}

BoundaryFn BoundaryFn::with_scale(double z) const {
    BoundaryFn f = *this;
    f.scale_ = z;
    return f;
}

int BoundaryFn::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

bool BoundaryFn::is_zero() const {
    if (scale_ == 0.0) return true;
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double quad_weighted(const BoundaryFn& phi, int n, int j) {
    auto integrand = [&](double y) {
        return phi.eval(y) * std::sin(n * kPi * y) * std::sin(j * kPi * y);
    };
    auto composite = [&](int panels) {
        double total = 0.0;
        const double h = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = (p + 0.5) * h;
            double s = 0.0;
            for (size_t q = 0; q < kGlNodes.size(); ++q) {
                const double dy = 0.5 * h * kGlNodes[q];
                s += kGlWeights[q] * (integrand(mid + dy) + integrand(mid - dy));
            }
            total += 0.5 * h * s;
        }
        return total;
    };
    int panels = 4 + std::max(0, phi.degree() + n + j) / 8;
    double coarse = composite(panels);
    for (int iter = 0; iter < 9; ++iter) {
        panels *= 2;
        const double fine = composite(panels);
        if (std::abs(fine - coarse) < 1e-12) return fine;
        coarse = fine;
    }
    throw QuadratureError(coarse, composite(panels * 2));
}

double lambda_phi(const BoundaryFn& phi) { return quad_weighted(phi, 2, 1); }

namespace {

// golden-section maximization of f over [a,b]
template <typename F>
double golden_max(F&& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a); f1 = f(x1);
        }
    }
    return std::max(f1, f2);
}

} // namespace

double derivative_sup_norm(const BoundaryFn& phi, int order, int samples) {
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= samples; ++i) {
        const double y = static_cast<double>(i) / samples;
        const double v = std::abs(phi.eval(y, order));
        if (v > best) { best = v; best_i = i; }
    }
    const double lo = std::max(0.0, (best_i - 1.0) / samples);
    const double hi = std::min(1.0, (best_i + 1.0) / samples);
    const double refined = golden_max([&](double y) { return std::abs(phi.eval(y, order)); }, lo, hi);
    return std::max(best, refined);
}

AdmissibilityReport check_admissible(const BoundaryFn& phi) {
    AdmissibilityReport rep;
    rep.endpoints_ok = std::abs(phi.eval(0.0)) < 1e-12 && std::abs(phi.eval(1.0)) < 1e-12;

    double vmax = 0.0, vmin = 0.0;
    const int samples = 4096;
    int imax = 0, imin = 0;
    for (int i = 0; i <= samples; ++i) {
        const double v = phi.eval(static_cast<double>(i) / samples);
        if (v > vmax) { vmax = v; imax = i; }
        if (v < vmin) { vmin = v; imin = i; }
    }
    auto refine = [&](int i, double sgn) {
        const double lo = std::max(0.0, (i - 1.0) / samples);
        const double hi = std::min(1.0, (i + 1.0) / samples);
        return golden_max([&](double y) { return sgn * phi.eval(y); }, lo, hi);
    };
    vmax = std::max(vmax, refine(imax, 1.0));
    vmin = std::min(vmin, -refine(imin, -1.0));
    rep.range_ok = vmin >= -1e-12 && vmax <= 1.0 + 1e-12;

    bool derivs_ok = true;
    for (int l = 1; l <= 5; ++l) {
        rep.derivative_bounds[static_cast<size_t>(l - 1)] = derivative_sup_norm(phi, l);
        derivs_ok = derivs_ok && rep.derivative_bounds[static_cast<size_t>(l - 1)] <= 1.0 + 1e-12;
    }
    rep.lambda_phi = phi.is_zero() ? 0.0 : lambda_phi(phi);
    rep.admissible = rep.endpoints_ok && rep.range_ok && derivs_ok &&
                     std::abs(rep.lambda_phi) > kLambdaTol;
    return rep;
}

BoundaryFn rescale_to_admissible(const BoundaryFn& phi) {
    if (phi.is_zero()) throw InadmissibleShapeError("zero boundary function");
    const BoundaryFn unit = phi.with_scale(1.0);
    if (std::abs(unit.eval(0.0)) > 1e-12 || std::abs(unit.eval(1.0)) > 1e-12)
        throw InadmissibleShapeError("phi must vanish at both endpoints");
    const int samples = 8192;
    double vmin = 0.0, vmax = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double v = unit.eval(static_cast<double>(i) / samples);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    if (vmin < -1e-10) throw InadmissibleShapeError("phi must be nonnegative on [0,1]");
    if (std::abs(lambda_phi(unit)) <= kLambdaTol)
        throw InadmissibleShapeError("Lambda_phi vanishes; scaling cannot fix it");

    double z = vmax > 0.0 ? 1.0 / vmax : std::numeric_limits<double>::infinity();
    for (int l = 1; l <= 5; ++l) {
        const double sup = derivative_sup_norm(unit, l);
        if (sup > 0.0) z = std::min(z, 1.0 / sup);
    }
    return unit.with_scale(z);
}

} // namespace nodalsplit
