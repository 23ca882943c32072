#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>

#include "nodalsplit/boundary.hpp"
#include "nodalsplit/field.hpp"

namespace nodalsplit {

// Discretization of A = -L where L is the Laplacian pulled back to the
// reference rectangle by the boundary deformation,
//   L = d_yy + Cxx d_xx + Cxy d_xy + Cx d_x,
//   Cxx = (N^2 + eta^2 phi'^2 (N-x)^2) / (N + eta phi)^2,
//   Cxy = 2 eta phi' (N-x) / (N + eta phi),
//   Cx  = eta (N-x) ((N + eta phi) phi'' - 2 eta phi'^2) / (N + eta phi)^2.
// Second-order central differences; at eta = 0 this is the 5-point Laplacian.
struct PulledBackOperator {
    Eigen::SparseMatrix<double> A;
    DomainSpec spec;
    BoundaryFn phi;
    GridSpec grid;
};

PulledBackOperator assemble(const DomainSpec& spec, const BoundaryFn& phi, const GridSpec& grid);

enum class Branch { upper, lower };

struct EigenSolution {
    double value = 0.0;
    Field2D field;  // boundary rows/cols zero, L2(Omega) normalized
    Branch branch = Branch::upper;
    double residual = 0.0;   // ||(A - value I) field|| / ||field||
    double ritz_imag = 0.0;  // |Im| of the Ritz value
    bool asym_warning = false;
    int sweeps = 0;
};

// inverse subspace iteration with a sparse LU of (A - shift I),
// Gram-Schmidt (thin QR) per sweep, Rayleigh-Ritz extraction through a
// small dense nonsymmetric eigensolve; iterates until the Ritz values
// drift by less than 1e-11
std::vector<EigenSolution> shift_invert_solve(const PulledBackOperator& op, double shift,
                                              int subspace_dim = 6, uint64_t seed = 0x5eed);

struct BranchPair {
    EigenSolution upper, lower;
    double lambda_degenerate = 0.0;  // lambda_{2,2} of the spec
};

// the two Ritz pairs nearest lambda_{2,2}, labeled by value; fields are
// sign-normalized so the projection onto sin(2 pi x/N) sin(2 pi y) is
// positive
BranchPair solve_branches(const DomainSpec& spec, const BoundaryFn& phi, const GridSpec& grid,
                          uint64_t seed = 0x5eed);

// discrete L2(Omega) norm with the pullback Jacobian (N + eta phi)/N
double omega_norm(const Field2D& field, const DomainSpec& spec, const BoundaryFn& phi);

} // namespace nodalsplit
