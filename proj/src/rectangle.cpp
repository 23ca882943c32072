#include "nodalsplit/rectangle.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nodalsplit {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
} // namespace

double aspect_from_k(int k) {
    if (k < 3) throw std::domain_error("k must be >= 3, got " + std::to_string(k));
    return std::sqrt((static_cast<double>(k) * k - 4.0) / 3.0);
}

double eta_crossing_guard(double N) { return std::sqrt(N * N + 1.0) - N; }

DomainSpec make_domain(int k, double eta) {
    DomainSpec spec;
    spec.k = k;
    spec.N = aspect_from_k(k);
    if (eta < 0.0) throw std::domain_error("eta must be nonnegative");
    if (eta >= eta_crossing_guard(spec.N))
        throw std::domain_error("eta=" + std::to_string(eta) +
                                " reaches the branch-crossing guard eta1=" +
                                std::to_string(eta_crossing_guard(spec.N)));
    spec.eta = eta;
    return spec;
}

double eigenvalue(const DomainSpec& spec, ModeIndex idx) {
    const double m = idx.m, n = idx.n;
    return kPi2 * (m * m / (spec.N * spec.N) + n * n);
}

double eigenfunction_eval(const DomainSpec& spec, ModeIndex idx, double x, double y) {
    return 2.0 / std::sqrt(spec.N) *
           std::sin(idx.m * kPi * x / spec.N) * std::sin(idx.n * kPi * y);
}

int spectral_index(const DomainSpec& spec, double lambda) {
    if (lambda > kPi2 * 1e6)
        throw NotAnEigenvalueError("lambda above the enumeration cap pi^2*1e6");
    const double s = lambda / kPi2;  // m^2/N^2 + n^2 target
    const double N2 = spec.N * spec.N;
    const int m_max = static_cast<int>(std::floor(std::sqrt(s * N2 * (1 + 1e-9)))) + 1;
    const int n_max = static_cast<int>(std::floor(std::sqrt(s * (1 + 1e-9)))) + 1;
    int below = 0;
    bool found = false;
    for (int m = 1; m <= m_max; ++m) {
        for (int n = 1; n <= n_max; ++n) {
            const double v = static_cast<double>(m) * m / N2 + static_cast<double>(n) * n;
            if (std::abs(v - s) <= 1e-9 * s) {
                found = true;
            } else if (v < s) {
                ++below;
            }
        }
    }
    if (!found) throw NotAnEigenvalueError("lambda is not in the spectrum of R(N)");
    return below + 1;
}

} // namespace nodalsplit
