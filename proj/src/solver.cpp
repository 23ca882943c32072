#include "nodalsplit/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "nodalsplit/hadamard.hpp"

namespace nodalsplit {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

PulledBackOperator assemble(const DomainSpec& spec, const BoundaryFn& phi, const GridSpec& grid) {
    if (grid.nx < 64 || grid.ny < 64)
        throw ResolutionError("grid too coarse: need nx >= 64 and ny >= 64");
    if (!check_admissible(phi).admissible)
        throw AdmissibilityError("phi is not admissible");

    const int nx = grid.nx, ny = grid.ny;
    const double N = spec.N, eta = spec.eta;
    const double hx = grid.hx(), hy = grid.hy();
    const int W = nx - 1, H = ny - 1;
    auto id = [H](int ix, int iy) { return (ix - 1) * H + (iy - 1); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(W) * H * 9);
    for (int iy = 1; iy < ny; ++iy) {
        const double y = iy * hy;
        const double f = phi.eval(y), fp = phi.eval(y, 1), fpp = phi.eval(y, 2);
        const double P = N + eta * f;
        for (int ix = 1; ix < nx; ++ix) {
            const double x = ix * hx;
            const double cxx = (N * N + eta * eta * fp * fp * (N - x) * (N - x)) / (P * P);
            const double cxy = 2.0 * eta * fp * (N - x) / P;
            const double cx = eta * (N - x) / (P * P) * (P * fpp - 2.0 * eta * fp * fp);

            const int row = id(ix, iy);
            auto put = [&](int jx, int jy, double v) {
                if (jx >= 1 && jx < nx && jy >= 1 && jy < ny)
                    trip.emplace_back(row, id(jx, jy), v);
            };
            // A = -L
            put(ix, iy, 2.0 / (hy * hy) + 2.0 * cxx / (hx * hx));
            put(ix + 1, iy, -cxx / (hx * hx) - cx / (2.0 * hx));
            put(ix - 1, iy, -cxx / (hx * hx) + cx / (2.0 * hx));
            put(ix, iy + 1, -1.0 / (hy * hy));
            put(ix, iy - 1, -1.0 / (hy * hy));
            const double w = -cxy / (4.0 * hx * hy);
            put(ix + 1, iy + 1, w);
            put(ix - 1, iy - 1, w);
            put(ix + 1, iy - 1, -w);
            put(ix - 1, iy + 1, -w);
        }
    }
    PulledBackOperator op;
    op.A.resize(W * H, W * H);
    op.A.setFromTriplets(trip.begin(), trip.end());
    op.A.makeCompressed();
    op.spec = spec;
    op.phi = phi;
    op.grid = grid;
    return op;
}

double omega_norm(const Field2D& field, const DomainSpec& spec, const BoundaryFn& phi) {
    const GridSpec& g = field.grid;
    double acc = 0.0;
    for (int iy = 1; iy < g.ny; ++iy) {
        const double w = (spec.N + spec.eta * phi.eval(iy * g.hy())) / spec.N;
        double rowsum = 0.0;
        for (int ix = 1; ix < g.nx; ++ix) {
            const double v = field.at(ix, iy);
            rowsum += v * v;
        }
        acc += w * rowsum;
    }
    return std::sqrt(acc * g.hx() * g.hy());
}

std::vector<EigenSolution> shift_invert_solve(const PulledBackOperator& op, double shift,
                                              int subspace_dim, uint64_t seed) {
    const int n = static_cast<int>(op.A.rows());
    const int m = std::max(subspace_dim, 4);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    double sigma = shift;
    for (int attempt = 0;; ++attempt) {
        Eigen::SparseMatrix<double> B = op.A;
        for (int i = 0; i < n; ++i) B.coeffRef(i, i) -= sigma;
        lu.compute(B);
        if (lu.info() == Eigen::Success) break;
        if (attempt >= 3) throw SingularShiftError("sparse LU failed near shift " + std::to_string(shift));
        sigma *= (1.0 + 1e-7 * (attempt + 1));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd V(n, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) V(i, j) = gauss(rng);
    {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
        V = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    }

    Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(m);
    Eigen::MatrixXcd ritz_vectors(m, m);
    Eigen::VectorXcd ritz_values(m);
    int sweeps = 0;
    bool converged = false;
    for (sweeps = 1; sweeps <= 500; ++sweeps) {
        Eigen::MatrixXd W = lu.solve(V);
        if (lu.info() != Eigen::Success)
            throw SingularShiftError("back substitution failed");
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(W);
        V = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);

        Eigen::MatrixXd H = V.transpose() * (op.A * V);
        Eigen::EigenSolver<Eigen::MatrixXd> es(H);
        ritz_values = es.eigenvalues();
        ritz_vectors = es.eigenvectors();

        Eigen::VectorXcd sorted = ritz_values;
        std::sort(sorted.data(), sorted.data() + m,
                  [](std::complex<double> a, std::complex<double> b) { return a.real() < b.real(); });
        double drift = 0.0;
        for (int i = 0; i < m; ++i) drift = std::max(drift, std::abs(sorted(i) - prev(i)));
        prev = sorted;
        if (sweeps >= 3 && drift < 1e-11) {
            converged = true;
            break;
        }
    }
    if (!converged) throw ConvergenceError("subspace iteration did not settle in 500 sweeps");

    std::vector<int> order(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(ritz_values(a).real() - shift) < std::abs(ritz_values(b).real() - shift);
    });

    std::vector<EigenSolution> out;
    out.reserve(static_cast<size_t>(m));
    for (int rank = 0; rank < m; ++rank) {
        const int i = order[static_cast<size_t>(rank)];
        EigenSolution sol;
        sol.value = ritz_values(i).real();
        sol.ritz_imag = std::abs(ritz_values(i).imag());
        sol.asym_warning = sol.ritz_imag > 1e-9;
        sol.sweeps = sweeps;
        Eigen::VectorXd x = V * ritz_vectors.col(i).real();
        const double xn = x.norm();
        if (xn == 0.0) continue;
        sol.residual = (op.A * x - sol.value * x).norm() / xn;

        sol.field = Field2D(op.grid);
        const int H2 = op.grid.ny - 1;
        for (int ix = 1; ix < op.grid.nx; ++ix)
            for (int iy = 1; iy < op.grid.ny; ++iy)
                sol.field.at(ix, iy) = x((ix - 1) * H2 + (iy - 1));
        const double nrm = omega_norm(sol.field, op.spec, op.phi);
        for (double& v : sol.field.data) v /= nrm;
        out.push_back(std::move(sol));
    }
    return out;
}

BranchPair solve_branches(const DomainSpec& spec, const BoundaryFn& phi, const GridSpec& grid,
                          uint64_t seed) {
    const double lam = eigenvalue(spec, {2, 2});
    const auto var = variation_analysis(phi, spec.k);
    PulledBackOperator op = assemble(spec, phi, grid);
    auto sols = shift_invert_solve(op, lam * (1.0 + 1e-3), 6, seed);

    const double h = std::max(grid.hx(), grid.hy());
    const double window = 10.0 * spec.eta * (std::abs(var.gamma_dot) + 1.0) + 20.0 * lam * h * h;
    std::vector<EigenSolution*> near;
    for (auto& s : sols)
        if (std::abs(s.value - lam) < window) near.push_back(&s);
    if (near.size() < 2)
        throw BranchIsolationError("fewer than two eigenvalues within " + std::to_string(window) +
                                   " of lambda_22");
    std::sort(near.begin(), near.end(), [&](const EigenSolution* a, const EigenSolution* b) {
        return std::abs(a->value - lam) < std::abs(b->value - lam);
    });
    EigenSolution* a = near[0];
    EigenSolution* b = near[1];
    if (a->value < b->value) std::swap(a, b);

    auto fix_sign = [&](EigenSolution& s) {
        double proj = 0.0;
        for (int ix = 1; ix < grid.nx; ++ix) {
            const double sx = std::sin(2.0 * kPi * ix * grid.hx() / spec.N);
            for (int iy = 1; iy < grid.ny; ++iy)
                proj += s.field.at(ix, iy) * sx * std::sin(2.0 * kPi * iy * grid.hy());
        }
        if (proj < 0.0)
            for (double& v : s.field.data) v = -v;
    };
    BranchPair pair;
    pair.lambda_degenerate = lam;
    pair.upper = std::move(*a);
    pair.lower = std::move(*b);
    pair.upper.branch = Branch::upper;
    pair.lower.branch = Branch::lower;
    fix_sign(pair.upper);
    fix_sign(pair.lower);
    return pair;
}

} // namespace nodalsplit
