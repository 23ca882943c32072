#include "nodalsplit/verify.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nodalsplit/hadamard.hpp"
#include "nodalsplit/io.hpp"
#include "nodalsplit/modes.hpp"
#include "nodalsplit/nodal.hpp"
#include "nodalsplit/runner.hpp"
#include "nodalsplit/solver.hpp"

namespace nodalsplit {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Check {
    bool ok = true;
    std::ostringstream what;
    void expect(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            if (what.tellp() > 0) what << "; ";
            what << msg;
        }
    }
    template <typename T>
    void note(const std::string& key, T v) {
        if (what.tellp() > 0) what << "; ";
        what << key << "=" << v;
    }
};

// random admissible boundary shapes: y(1-y) q(y)^2 is nonnegative with zero
// endpoints; rejection keeps |Lambda_phi| comfortably off zero
std::vector<BoundaryFn> random_admissible(int count, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<BoundaryFn> out;
    while (static_cast<int>(out.size()) < count) {
        std::vector<double> q{uni(rng), uni(rng), uni(rng), uni(rng)};
        // (q0 + q1 y + q2 y^2 + q3 y^3)^2
        std::vector<double> sq(7, 0.0);
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) sq[i + j] += q[i] * q[j];
        // multiply by y - y^2
        std::vector<double> shape(9, 0.0);
        for (size_t i = 0; i < 7; ++i) {
            shape[i + 1] += sq[i];
            shape[i + 2] -= sq[i];
        }
        BoundaryFn cand = BoundaryFn::polynomial(shape);
        try {
            cand = rescale_to_admissible(cand);
        } catch (const InadmissibleShapeError&) {
            continue;
        }
        // headroom so 2*phi stays admissible in the scaling checks
        cand = cand.scaled_by(0.45);
        if (std::abs(lambda_phi(cand)) < 1e-8) continue;
        out.push_back(cand);
    }
    return out;
}

struct SolveKey {
    int k;
    int ny;
    double eta;
    bool operator<(const SolveKey& o) const {
        if (k != o.k) return k < o.k;
        if (ny != o.ny) return ny < o.ny;
        return eta < o.eta;
    }
};

struct Context {
    uint64_t seed;
    std::map<SolveKey, BranchPair> cache;
    const BoundaryFn bump = BoundaryFn::bump(1.0 / 6.0);

    const BranchPair& solve(int k, double eta, int ny) {
        const SolveKey key{k, ny, eta};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const DomainSpec spec = make_domain(k, eta);
        const GridSpec grid = make_grid(k, ny);
        BranchPair pair = solve_branches(spec, bump, grid, seed);
        return cache.emplace(key, std::move(pair)).first->second;
    }
};

// ---- criterion 1: exact degeneracy and spectral index ----
Check criterion_degeneracy() {
    Check c;
    for (int k = 3; k <= 40; ++k) {
        const DomainSpec spec = make_domain(k, 0.0);
        const double l22 = eigenvalue(spec, {2, 2});
        const double lk1 = eigenvalue(spec, {k, 1});
        c.expect(std::abs(l22 - lk1) <= 1e-12 * l22,
                 "k=" + std::to_string(k) + " degeneracy broken");
        const int idx = spectral_index(spec, lk1);
        c.expect(idx > k, "k=" + std::to_string(k) + " index " + std::to_string(idx) + " <= k");
    }
    return c;
}

// ---- criterion 2: Hadamard consistency on random phi ----
Check criterion_hadamard(const std::vector<BoundaryFn>& phis) {
    Check c;
    for (size_t pi = 0; pi < phis.size(); ++pi) {
        const BoundaryFn& phi = phis[pi];
        for (int k = 4; k <= 12; ++k) {
            const auto var = variation_analysis(phi, k);
            const auto& d = var.d;
            const double r1 = (d.a + var.mu_dot) * var.c1 + d.b * var.c2;
            const double r2 = d.b * var.c1 + (d.c + var.mu_dot) * var.c2;
            c.expect(std::hypot(r1, r2) <= 1e-10, "eigen residual at phi#" + std::to_string(pi) +
                                                      " k=" + std::to_string(k));
            c.expect(d.trace() > 0.0 && d.det() > 0.0, "trace/det sign at k=" + std::to_string(k));
            for (double s : {0.5, 2.0}) {
                const auto vs = variation_analysis(phi.scaled_by(s), k);
                c.expect(std::abs(vs.c1 - var.c1) <= 1e-12 && std::abs(vs.c2 - var.c2) <= 1e-12,
                         "c(s phi) != c(phi) at s=" + std::to_string(s));
            }
            const double N = aspect_from_k(k);
            const double n32 = std::pow(N, 1.5);
            const double c1_rec =
                -(k * kPi / n32) * coefficient_variation(phi, k, var.c1, var.c2, 1) / var.mu_dot;
            const double c2_rec =
                -(2.0 * kPi / n32) * coefficient_variation(phi, k, var.c1, var.c2, 2) / var.mu_dot;
            c.expect(std::abs(c1_rec - var.c1) <= 1e-9 * std::max(1.0, std::abs(var.c1)),
                     "mode-variation c1 reconstruction at k=" + std::to_string(k));
            c.expect(std::abs(c2_rec - var.c2) <= 1e-9 * std::max(1.0, std::abs(var.c2)),
                     "mode-variation c2 reconstruction at k=" + std::to_string(k));
        }
    }
    return c;
}

// ---- criterion 3: coefficient envelope ----
Check criterion_envelope(const std::vector<BoundaryFn>& phis) {
    Check c;
    for (const auto& phi : phis) {
        for (int k = 3; k <= 12; ++k) {
            const auto var = variation_analysis(phi, k);
            const double N = aspect_from_k(k);
            if (k >= 4) {
                c.expect(std::abs(var.c1) < std::sqrt(16.0 / (k * k + 16.0)),
                         "upper c1 bound at k=" + std::to_string(k));
                c.expect(std::abs(var.c2) > std::sqrt(static_cast<double>(k) * k / (k * k + 16.0)),
                         "lower c2 bound at k=" + std::to_string(k));
            }
            c.expect(std::abs(var.c1) < 4.0 / k, "c1 < 4/k at k=" + std::to_string(k));
            c.expect(std::abs(var.c1) > 1e-6 / N, "c1 floor at k=" + std::to_string(k));
        }
    }
    return c;
}

// ---- criterion 4: exact nodal counts ----
Check criterion_exact_counts() {
    Check c;
    const BoundaryFn bump = BoundaryFn::bump(1.0 / 6.0);
    for (int k : {4, 6, 8, 10}) {
        const DomainSpec spec = make_domain(k, 0.0);
        const auto pred = predict_nodal(spec, bump);
        c.expect(pred.grid_count_v == 4, "v0 count k=" + std::to_string(k) + " is " +
                                             std::to_string(pred.grid_count_v));
        const auto var = variation_analysis(bump, k);
        GridSpec g;
        g.N = spec.N;
        g.ny = 1024;
        g.nx = static_cast<int>(std::ceil(1024 * spec.N));
        const Field2D v0 = sample_v0(spec, var.c1, var.c2, g);
        c.expect(crossing_detected(v0, spec.N / 2, *pred.y_bar),
                 "missing crossing at k=" + std::to_string(k));
        if (k >= 8)
            c.expect(pred.grid_count_w == k, "w0 count k=" + std::to_string(k) + " is " +
                                                 std::to_string(pred.grid_count_w));
    }
    for (int k : {5, 7, 9}) {
        const auto pred = predict_nodal(make_domain(k, 0.0), bump);
        c.expect(pred.grid_count_v == 3, "v0 count k=" + std::to_string(k) + " is " +
                                             std::to_string(pred.grid_count_v));
    }
    {
        const auto pred12 = predict_nodal(make_domain(12, 0.0), bump);
        c.expect(pred12.grid_count_w == 12, "w0 count k=12 is " + std::to_string(pred12.grid_count_w));
    }
    for (const char* preset : {"skew24", "skew8"}) {
        const BoundaryFn phi = rescale_to_admissible(BoundaryFn::preset(preset));
        for (int k : {5, 6, 7}) {
            const auto pred = predict_nodal(make_domain(k, 0.0), phi);
            c.expect(pred.domain_count_w == pred.grid_count_w,
                     std::string(preset) + " k=" + std::to_string(k) + " predictor " +
                         std::to_string(pred.domain_count_w) + " vs grid " +
                         std::to_string(pred.grid_count_w));
        }
    }
    const double m7 = m_k(7, aspect_from_k(7));
    c.note("M7", m7);
    c.expect(std::abs(m7 - 1.736) <= 1e-3, "M7 outside 1.736 +- 0.001");
    return c;
}

// ---- criterion 5: solver grid convergence at the unperturbed degeneracy ----
Check criterion_solver_convergence(Context& ctx) {
    Check c;
    const double l22 = eigenvalue(make_domain(4, 0.0), {2, 2});
    const auto& coarse = ctx.solve(4, 0.0, 128);
    const auto& fine = ctx.solve(4, 0.0, 256);
    for (bool upper : {true, false}) {
        const double ec = std::abs((upper ? coarse.upper : coarse.lower).value - l22);
        const double ef = std::abs((upper ? fine.upper : fine.lower).value - l22);
        const double ratio = ec / ef;
        c.note(upper ? "ratio_upper" : "ratio_lower", ratio);
        c.expect(ratio >= 3.5 && ratio <= 4.5, "convergence ratio outside [3.5, 4.5]");
    }
    for (const auto* pair : {&coarse, &fine}) {
        c.expect(pair->upper.residual < 1e-8 && pair->lower.residual < 1e-8, "residual >= 1e-8");
        c.expect(std::abs(pair->upper.value - pair->lower.value) <= 1e-9 * l22,
                 "discrete pair not degenerate at eta=0");
    }
    return c;
}

// ---- criterion 6: branch slopes against the variation matrix ----
Check criterion_branch_slopes(Context& ctx) {
    Check c;
    const auto var = variation_analysis(ctx.bump, 4);
    const double e_lo = 5e-4, e_hi = 2e-3;
    const auto& lo = ctx.solve(4, e_lo, 256);
    const auto& mid = ctx.solve(4, 1e-3, 256);
    const auto& hi = ctx.solve(4, e_hi, 256);
    for (const auto* p : {&lo, &mid, &hi})
        c.expect(p->upper.value > p->lower.value, "mu <= gamma");
    const double slope_mu = (hi.upper.value - lo.upper.value) / (e_hi - e_lo);
    const double slope_ga = (hi.lower.value - lo.lower.value) / (e_hi - e_lo);
    c.note("slope_mu", slope_mu);
    c.note("mu_dot", var.mu_dot);
    c.note("slope_gamma", slope_ga);
    c.note("gamma_dot", var.gamma_dot);
    c.expect(std::abs(slope_mu - var.mu_dot) <= 0.1 * std::abs(var.mu_dot),
             "upper slope off by more than 10%");
    c.expect(std::abs(slope_ga - var.gamma_dot) <= 0.1 * std::abs(var.gamma_dot),
             "lower slope off by more than 10%");
    return c;
}

// ---- criterion 7: sqrt(eta) law of the hyperbola vertex gap ----
Check criterion_gap_law(Context& ctx) {
    Check c;
    const auto var = variation_analysis(ctx.bump, 4);
    std::vector<double> etas{1e-3, 2e-3, 4e-3}, gaps;
    for (double eta : etas) {
        const auto& pair = ctx.solve(4, eta, 256);
        const DomainSpec spec = make_domain(4, eta);
        const auto fit = fit_hyperbola(pair.upper.field, spec, var.c1, var.c2, pair.upper.value);
        gaps.push_back(fit.gap);
        const int nv = count_domains(pair.upper.field);
        c.expect(nv == 3, "v domain count " + std::to_string(nv) + " at eta=" + fmt12(eta));
    }
    const double slope = loglog_slope(etas, gaps);
    c.note("slope_gap", slope);
    c.note("gap_at_1e-3", gaps[0]);
    c.expect(slope >= 0.4 && slope <= 0.6, "gap slope outside [0.4, 0.6]");
    c.expect(gaps[0] < gaps[1] && gaps[1] < gaps[2], "gap not monotone in eta");
    return c;
}

// ---- criterion 8: lower branch at k=8 and odd k=5 ----
Check criterion_lower_and_odd(Context& ctx) {
    Check c;
    auto w_metrics = [&](double eta) {
        const auto& pair = ctx.solve(8, eta, 256);
        const GridSpec& g = pair.lower.field.grid;
        const int count = count_domains(pair.lower.field);
        const auto curves = marching_squares(pair.lower.field);
        int spanning = 0;
        for (const auto& cur : curves) {
            const bool tb = (cur.start_side == BoundarySide::top && cur.end_side == BoundarySide::bottom) ||
                            (cur.start_side == BoundarySide::bottom && cur.end_side == BoundarySide::top);
            if (tb) ++spanning;
        }
        const double h = std::max(g.hx(), g.hy());
        const double gap = curve_gap(curves, {h, g.N - h, h, 1.0 - h});
        return std::tuple<int, int, double>{count, spanning, gap};
    };
    const auto [count1, span1, gap1] = w_metrics(1e-3);
    const auto [count2, span2, gap2] = w_metrics(5e-4);
    c.note("w_count", count1);
    c.note("w_spanning_curves", span1);
    c.note("w_min_gap", gap1);
    c.expect(count1 == 8, "w count at k=8 is " + std::to_string(count1));
    c.expect(span1 == 7, "w has " + std::to_string(span1) + " boundary-to-boundary curves");
    c.expect(std::abs(gap1 - gap2) <= 0.2 * gap1, "k=8 curve gap unstable under eta halving");

    auto v_metrics = [&](double eta) {
        const auto& pair = ctx.solve(5, eta, 256);
        const int count = count_domains(pair.upper.field);
        auto curves = marching_squares(pair.upper.field);
        std::erase_if(curves, [](const NodalCurve& cur) { return cur.points.size() < 16; });
        const GridSpec& g = pair.upper.field.grid;
        const double h = std::max(g.hx(), g.hy());
        const double gap = curve_gap(curves, {h, g.N - h, h, 1.0 - h});
        return std::tuple<int, size_t, double>{count, curves.size(), gap};
    };
    const auto [vcount, vcurves, vgap] = v_metrics(1e-3);
    const auto [vcount2, vcurves2, vgap2] = v_metrics(5e-4);
    c.note("v5_count", vcount);
    c.note("v5_curves", vcurves);
    c.note("v5_gap", vgap);
    c.expect(vcount == 3, "v count at k=5 is " + std::to_string(vcount));
    c.expect(vcurves == 2, "v at k=5 has " + std::to_string(vcurves) + " curves");
    c.expect(vgap >= 0.1 && vgap <= 10.0, "k=5 curve separation not O(1)");
    c.expect(std::abs(vgap - vgap2) <= 0.2 * vgap, "k=5 separation unstable under eta halving");
    return c;
}

// ---- criterion 9: mode amplitude asymptotics ----
Check criterion_mode_asymptotics(Context& ctx) {
    Check c;
    const auto var = variation_analysis(ctx.bump, 4);
    const double sN = std::sqrt(aspect_from_k(4));
    // dyadic sweep; ny tracks ceil(8/sqrt(eta)) so the discretization floor
    // scales with eta alongside the signal
    const std::vector<double> etas{1.6e-3, 8e-4, 4e-4};
    const std::vector<int> nys{200, 283, 400};
    std::vector<double> d1, d2, tails;
    for (size_t i = 0; i < etas.size(); ++i) {
        const auto& pair = ctx.solve(4, etas[i], nys[i]);
        const DomainSpec spec = make_domain(4, etas[i]);
        const int j_max = std::min(16, pair.upper.field.grid.ny / 4);
        const auto modes = extract_modes(pair.upper.field, pair.upper.value, j_max);
        const auto summary = fit_amplitudes(modes, pair.upper.field, spec, ctx.bump);
        d1.push_back(std::abs(summary.a1 - 2.0 * var.c1 / sN));
        d2.push_back(std::abs(summary.a2 - 2.0 * var.c2 / sN));
        tails.push_back(summary.error_tail);
    }
    const double r1 = loglog_slope(etas, d1);
    const double r2 = loglog_slope(etas, d2);
    c.note("rate_a1", r1);
    c.note("rate_a2", r2);
    c.expect(r1 >= 0.8 && r1 <= 1.2, "A1 deviation rate outside [0.8, 1.2]");
    c.expect(r2 >= 0.8 && r2 <= 1.2, "A2 deviation rate outside [0.8, 1.2]");

    const double tail_ratio = tails[1] / tails[0];
    c.note("tail_ratio", tail_ratio);
    c.expect(tail_ratio >= 0.125 && tail_ratio <= 0.375,
             "error tail does not quarter under eta halving");

    const auto& pair = ctx.solve(4, 1e-3, 256);
    const DomainSpec spec = make_domain(4, 1e-3);
    const auto modes = extract_modes(pair.upper.field, pair.upper.value, 16);
    const auto summary = fit_amplitudes(modes, pair.upper.field, spec, ctx.bump);
    const auto rows = boundary_coefficients_check(summary, ctx.bump, spec, var.c1, var.c2, 3);
    for (const auto& row : rows) {
        c.note("vj_ratio_j" + std::to_string(row.j), row.ratio);
        c.expect(!row.predicted_near_zero && row.ratio >= 0.8 && row.ratio <= 1.2,
                 "v_j(0) prediction ratio off at j=" + std::to_string(row.j));
    }
    return c;
}

// ---- criterion 10: boundary orthogonality ----
Check criterion_orthogonality(Context& ctx) {
    Check c;
    struct Case { int k; bool upper; int expected; };
    const Case cases[] = {{4, true, 4}, {5, true, 4}, {8, false, 14}};
    for (const auto& cs : cases) {
        const auto& pair = ctx.solve(cs.k, 1e-3, 256);
        const auto& sol = cs.upper ? pair.upper : pair.lower;
        const DomainSpec spec = make_domain(cs.k, 1e-3);
        const auto curves = marching_squares(sol.field);
        const auto angles = boundary_angles(curves, spec, ctx.bump, sol.field.grid);
        double worst = 0.0;
        for (const auto& a : angles) worst = std::max(worst, std::abs(a.angle_deg - 90.0));
        c.note("k" + std::to_string(cs.k) + "_intersections", angles.size());
        c.note("k" + std::to_string(cs.k) + "_worst_deg", worst);
        c.expect(static_cast<int>(angles.size()) == cs.expected,
                 "k=" + std::to_string(cs.k) + " intersection count " +
                     std::to_string(angles.size()) + " != " + std::to_string(cs.expected));
        c.expect(worst <= 5.0, "k=" + std::to_string(cs.k) + " angle deviates more than 5 deg");
    }
    return c;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log) {
    Context ctx;
    ctx.seed = opt.seed;
    const auto phis = random_admissible(20, opt.seed);

    struct Item {
        int id;
        const char* name;
        std::function<Check()> fn;
    };
    const std::vector<Item> items = {
        {1, "degeneracy and spectral index", [&] { return criterion_degeneracy(); }},
        {2, "hadamard consistency", [&] { return criterion_hadamard(phis); }},
        {3, "coefficient envelope", [&] { return criterion_envelope(phis); }},
        {4, "exact nodal counts", [&] { return criterion_exact_counts(); }},
        {5, "solver grid convergence", [&] { return criterion_solver_convergence(ctx); }},
        {6, "branch slope law", [&] { return criterion_branch_slopes(ctx); }},
        {7, "sqrt-eta gap law", [&] { return criterion_gap_law(ctx); }},
        {8, "lower branch and odd k", [&] { return criterion_lower_and_odd(ctx); }},
        {9, "mode asymptotics", [&] { return criterion_mode_asymptotics(ctx); }},
        {10, "boundary orthogonality", [&] { return criterion_orthogonality(ctx); }},
    };

    std::vector<CriterionResult> results;
    for (const auto& item : items) {
        CriterionResult r;
        r.id = item.id;
        r.name = item.name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            Check c = item.fn();
            r.pass = c.ok;
            r.details = c.what.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.details = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << "criterion " << r.id << " (" << r.name << "): " << (r.pass ? "PASS" : "FAIL");
        if (!r.details.empty()) log << "  [" << r.details << "]";
        log << "  (" << static_cast<int>(r.seconds * 1000) << " ms)\n";
        results.push_back(std::move(r));
    }
    return results;
}

void write_verify_report(const std::string& path, const std::vector<CriterionResult>& results,
                         const std::string& config_hash) {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["criteria"] = nlohmann::json::array();
    bool all = true;
    for (const auto& r : results) {
        nlohmann::json je;
        je["id"] = r.id;
        je["name"] = r.name;
        je["pass"] = r.pass;
        je["skipped"] = r.skipped;
        je["seconds"] = r.seconds;
        je["details"] = r.details;
        j["criteria"].push_back(je);
        all = all && (r.pass || r.skipped);
    }
    j["all_pass"] = all;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

} // namespace nodalsplit
