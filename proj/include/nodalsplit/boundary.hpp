#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nodalsplit/errors.hpp"

namespace nodalsplit {

// Boundary profile phi on [0,1], restricted to polynomial families so that
// derivatives are exact. Stored as monomial coefficients of the unit-scale
// shape; `scale` is the multiplicative prefactor Z.
class BoundaryFn {
  public:
    BoundaryFn() = default;
    static BoundaryFn polynomial(std::vector<double> coeffs, double scale = 1.0);
    static BoundaryFn preset(const std::string& name, double scale = 1.0);
    static BoundaryFn bump(double scale = 1.0);    // Z * y (1-y)^2
    static BoundaryFn skew24(double scale = 1.0);  // Z * y^24 (1-y)
    static BoundaryFn skew8(double scale = 1.0);   // Z * y^8 (1-y)
    static BoundaryFn zero();

    // phi^(order)(y); order in 0..5
    double eval(double y, int order = 0) const;

    BoundaryFn scaled_by(double s) const;
    BoundaryFn with_scale(double z) const;

    double scale() const { return scale_; }
    const std::vector<double>& shape_coeffs() const { return coeffs_; }
    const std::string& preset_name() const { return name_; }
    int degree() const;
    bool is_zero() const;

  private:
    std::vector<double> coeffs_;  // ascending monomial degree, unit scale
    double scale_ = 1.0;
    std::string name_;  // empty for bare polynomials
};

// integral of phi(y) sin(n pi y) sin(j pi y) over [0,1], composite
// Gauss-Legendre with panel doubling until the absolute change is < 1e-12
double quad_weighted(const BoundaryFn& phi, int n, int j);

// Lambda_phi = integral of phi sin(2 pi y) sin(pi y)
double lambda_phi(const BoundaryFn& phi);

struct AdmissibilityReport {
    bool endpoints_ok = false;
    bool range_ok = false;
    std::array<double, 5> derivative_bounds{};  // sup |phi^(l)|, l = 1..5
    double lambda_phi = 0.0;
    bool admissible = false;
};

// tolerance below which Lambda_phi counts as zero
inline constexpr double kLambdaTol = 1e-10;

AdmissibilityReport check_admissible(const BoundaryFn& phi);

// Largest Z with phi in [0,1] and all five derivative sup-norms <= 1.
// Requires phi(0)=phi(1)=0, phi >= 0, Lambda_phi != 0 at any scale.
BoundaryFn rescale_to_admissible(const BoundaryFn& phi);

// dense-sampling sup of |phi^(order)| with local golden-section refinement
double derivative_sup_norm(const BoundaryFn& phi, int order, int samples = 4096);

} // namespace nodalsplit
