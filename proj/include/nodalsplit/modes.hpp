#pragma once

#include <vector>

#include "nodalsplit/boundary.hpp"
#include "nodalsplit/field.hpp"

namespace nodalsplit {

// Partial Fourier mode in y: v_j(x) = 2 * integral of field(x,y) sin(j pi y) dy
struct ModeProfile {
    int j = 0;
    std::vector<double> values;  // one entry per grid column, 0..nx
    double mu_j = 0.0;           // sqrt(|value - pi^2 j^2|)
    bool oscillatory = false;    // j = 1,2
};

std::vector<ModeProfile> extract_modes(const Field2D& field, double eigenvalue, int j_max);

struct ModeSummary {
    double a1 = 0.0, a2 = 0.0;   // fitted sine amplitudes of modes 1, 2
    std::vector<double> v_at_0;  // v_j along the physical x=0 line, index j-1
    double error_sup = 0.0;      // filled by error_field
    double error_tail = 0.0;     // sum of v_j(0)^2, j >= 3
};

// Least-squares fit of modes 1,2 against {cos(mu_j x), sin(mu_j x)} over
// x in [0.1 N, 0.9 N]. v_at_0 is read along the physical line x = 0, which
// sits at x_ref = N eta phi(y) / (N + eta phi(y)) on the pullback grid.
ModeSummary fit_amplitudes(const std::vector<ModeProfile>& modes, const Field2D& field,
                           const DomainSpec& spec, const BoundaryFn& phi);

struct CoefficientRow {
    int j = 0;
    double measured = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;
    bool predicted_near_zero = false;
};

// measured v_j(0) against the first-order prediction
// (4 pi eta / N^{3/2}) (k c1 <phi, sin pi y sin j pi y> + 2 c2 <phi, sin 2 pi y sin j pi y>)
std::vector<CoefficientRow> boundary_coefficients_check(const ModeSummary& summary,
                                                        const BoundaryFn& phi,
                                                        const DomainSpec& spec, double c1,
                                                        double c2, int j_max);

struct ErrorFieldResult {
    Field2D E;
    double error_sup = 0.0;
    double error_sup_midstrip = 0.0;  // sup over x in [N/4, 3N/4]
    double error_tail = 0.0;
};

// E = field - mode1 x sin(pi y) - mode2 x sin(2 pi y)
ErrorFieldResult error_field(const Field2D& field, const std::vector<ModeProfile>& modes,
                             const ModeSummary& summary);

} // namespace nodalsplit
