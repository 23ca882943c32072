#pragma once

#include <optional>
#include <utility>

#include "nodalsplit/boundary.hpp"
#include "nodalsplit/field.hpp"
#include "nodalsplit/rectangle.hpp"

namespace nodalsplit {

// First-order boundary-variation matrix at the degenerate eigenvalue,
// D = (4 pi^2 / N^3) [[k^2 <phi sin^2(pi y)>, 2k Lambda_phi],
//                     [2k Lambda_phi,        4 <phi sin^2(2 pi y)>]]
// in the (psi_{k,1}, psi_{2,2}) basis.
struct VariationMatrix {
    double a = 0.0, b = 0.0, c = 0.0;  // [[a, b], [b, c]]
    double trace() const { return a + c; }
    double det() const { return a * c - b * b; }
};

struct VariationResult {
    VariationMatrix d;
    double mu_dot = 0.0;     // upper-branch slope, -smaller eigenvalue of D
    double gamma_dot = 0.0;  // lower-branch slope
    double c1 = 0.0, c2 = 0.0;  // unit eigenvector of D for -mu_dot, c2 > 0
    double lambda_phi = 0.0;
};

VariationMatrix variation_matrix(const BoundaryFn& phi, int k);

// (mu_dot, gamma_dot) with mu_dot >= gamma_dot; the negatives of the
// eigenvalues of the symmetric 2x2 matrix
std::pair<double, double> branch_slopes(const VariationMatrix& d);

// unit eigenvector for eigenvalue -mu_dot, sign-normalized so c2 > 0;
// throws DegenerateDirectionError when b = 0
std::pair<double, double> coefficients(const VariationMatrix& d);

VariationResult variation_analysis(const BoundaryFn& phi, int k);

// first eta-variation of the j-th Fourier coefficient at x = 0:
// (4 pi / N^{3/2}) < phi (2 c2 sin 2 pi y + k c1 sin pi y), sin j pi y >
double coefficient_variation(const BoundaryFn& phi, int k, double c1, double c2, int j);

// sin(k pi x / N) / sin(2 pi x / N) with l'Hopital values at the removable
// points x in {0, N/2 (k even), N}; +-inf at x = N/2 for odd k
double sin_ratio(int k, double N, double x);

// heights of the v0 / w0 nodal graphs above x; empty when the arccos
// argument leaves [-1,1] (no nodal point above that x)
std::optional<double> f_v(const DomainSpec& spec, double c1, double c2, double x);
std::optional<double> f_w(const DomainSpec& spec, double c1, double c2, double x);

// y-bar = arccos(cos(k pi/2) k c1 / (4 c2)) / pi, the crossing height of
// v0 on the midline; k must be even
double crossing_height(const DomainSpec& spec, double c1, double c2);

struct Interval {
    double lo = 0.0, hi = 0.0;
};

// interval holding the extremum of sin^2(k pi x/N)/sin^2(2 pi x/N) that
// governs whether the w0 nodal curves merge
Interval mk_interval(int k, double N);

// max of the squared sine ratio over mk_interval, by 64-sample bracketing
// plus golden-section refinement
double m_k(int k, double N);

struct NodalPrediction {
    bool even = false;
    std::optional<double> y_bar;  // present iff k even
    double f_v_at_0 = 0.0;
    int domain_count_v = 0;
    int domain_count_w = 0;
    double m_k = 0.0;
    int w_curve_count = 0;
    int grid_count_v = 0;  // flood-fill cross-check on a 1024-row grid
    int grid_count_w = 0;
    bool predictor_consistent = false;
};

NodalPrediction predict_nodal(const DomainSpec& spec, const BoundaryFn& phi);

// closed-form limiting eigenfunctions sampled on a grid
Field2D sample_v0(const DomainSpec& spec, double c1, double c2, const GridSpec& g);
Field2D sample_w0(const DomainSpec& spec, double c1, double c2, const GridSpec& g);

} // namespace nodalsplit
