#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "nodalsplit/boundary.hpp"
#include "nodalsplit/field.hpp"

namespace nodalsplit {

enum class BoundarySide { none, left, right, bottom, top };

struct NodalCurve {
    std::vector<std::array<double, 2>> points;  // pullback coordinates
    bool closed = false;
    BoundarySide start_side = BoundarySide::none;
    BoundarySide end_side = BoundarySide::none;
    std::array<bool, 2> endpoints_on_boundary() const {
        return {start_side != BoundarySide::none, end_side != BoundarySide::none};
    }
};

// Linear-interpolated iso-contour extraction over interior cells only;
// boundary zeros of Dirichlet fields are not treated as nodal evidence.
// Saddle cells are resolved by the sign of the cell-center average.
std::vector<NodalCurve> marching_squares(const Field2D& field, double iso = 0.0);

// connected components of the strict-sign partition of interior nodes,
// 4-connectivity; near-zero nodes (|v| < 1e-12 max|v|) separate regions
// but never form their own
int count_domains(const Field2D& field);

// alpha (x - N/2)(y - ybar) + beta (x - N/2) + upsilon (y - ybar) + rho
struct ModelPolynomial {
    double alpha = 0.0, beta = 0.0, upsilon = 0.0, rho = 0.0;
};

struct HyperbolaFit {
    ModelPolynomial poly;
    double x_ref = 0.0, y_ref = 0.0;  // expansion point (N/2, ybar)
    double center_x = 0.0, center_y = 0.0;
    double d_const = 0.0;  // (beta*upsilon - rho*alpha) / alpha^2
    double gap = 0.0;      // sqrt(8 |d_const|), vertex separation
    int angle_sign = 0;    // sign of the field at the expansion point
    bool geometry_resolved = false;  // gap > 4 max(hx, hy)
};

// zero set of the model polynomial; throws DegenerateModelError when the
// bilinear term or beta*upsilon - rho*alpha vanishes
HyperbolaFit solve_model(const ModelPolynomial& poly, double x_ref, double y_ref);

// Local bilinear model of an upper-branch field near the broken crossing
// (N/2, ybar), k even. alpha comes from the analytic mixed derivative of
// c1 psi_{k,1} + c2 psi_{2,2}; rho is the interpolated field value; beta and
// upsilon differentiate the two-mode reconstruction fitted over the interior
// window. branch_value supplies mu_1, mu_2.
HyperbolaFit fit_hyperbola(const Field2D& field, const DomainSpec& spec, double c1, double c2,
                           double branch_value);

struct Region {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool contains(double x, double y) const {
        return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
    }
};

// minimal distance between vertices of distinct curves inside the region
double curve_gap(const std::vector<NodalCurve>& curves, const Region& region);

struct BoundaryAngle {
    double x = 0.0, y = 0.0;  // extrapolated boundary intersection (pullback)
    double angle_deg = 0.0;   // against the local boundary tangent, in [0, 90]
    BoundarySide side = BoundarySide::none;
    bool short_fit = false;   // fewer than 8 points available
};

std::vector<BoundaryAngle> boundary_angles(const std::vector<NodalCurve>& curves,
                                           const DomainSpec& spec, const BoundaryFn& phi,
                                           const GridSpec& grid);

enum class GraphAxis { y_of_x, x_of_y };

struct GraphDeviation {
    double sup_gap = 0.0;
    double sup_slope_gap = 0.0;
};

// sup |curve - reference| and |finite-difference slope - reference slope|
// for the single curve crossing the window
GraphDeviation graph_deviation(const std::vector<NodalCurve>& curves,
                               const std::function<std::optional<double>(double)>& reference,
                               const Region& window, GraphAxis axis);

// degenerate-saddle probe: interpolated |field| at the predicted crossing
// below 1e-9 max|field|
bool crossing_detected(const Field2D& field, double x0, double y0);

struct NodalDecomposition {
    std::vector<NodalCurve> curves;
    int domain_count = 0;
    bool crossing = false;
    std::optional<double> gap;
    std::optional<HyperbolaFit> hyperbola;
};

// full nodal analysis of a branch field; the hyperbola fit is attempted for
// even k on upper-branch fields with eta > 0
NodalDecomposition decompose(const Field2D& field, const DomainSpec& spec, double c1, double c2,
                             double branch_value, bool upper_branch);

} // namespace nodalsplit
