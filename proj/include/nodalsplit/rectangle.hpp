#pragma once

#include "nodalsplit/errors.hpp"

namespace nodalsplit {

// R(N) = [0,N] x [0,1] with N derived from k via k^2 = 3N^2 + 4,
// which enforces the degeneracy lambda_{2,2} = lambda_{k,1}.
struct DomainSpec {
    int k = 4;
    double eta = 0.0;
    double N = 2.0;  // always recomputed from k
};

struct ModeIndex {
    int m = 1;
    int n = 1;
};

// N = sqrt((k^2 - 4) / 3), k >= 3
double aspect_from_k(int k);

// eta value at which the (k,1) and (1,2) branches of the enclosing
// rectangle [-eta,N]x[0,1] cross; perturbations must stay below it
double eta_crossing_guard(double N);

DomainSpec make_domain(int k, double eta);

double eigenvalue(const DomainSpec& spec, ModeIndex idx);

// (2/sqrt(N)) sin(m pi x / N) sin(n pi y); unit L2(R) norm
double eigenfunction_eval(const DomainSpec& spec, ModeIndex idx, double x, double y);

// 1-based position of the first occurrence of lambda in the ascending
// Dirichlet spectrum of R(N); throws NotAnEigenvalueError if lambda is
// not an eigenvalue to 1e-9 relative tolerance
int spectral_index(const DomainSpec& spec, double lambda);

} // namespace nodalsplit
