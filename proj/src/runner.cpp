#include "nodalsplit/runner.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nodalsplit/hadamard.hpp"
#include "nodalsplit/io.hpp"
#include "nodalsplit/modes.hpp"
#include "nodalsplit/nodal.hpp"
#include "nodalsplit/solver.hpp"
#include "nodalsplit/verify.hpp"

namespace nodalsplit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string hash_hex(uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

BoundaryFn resolve_phi(const RunConfig& cfg, std::ostream& log) {
    auto rep = check_admissible(cfg.phi);
    if (rep.admissible) return cfg.phi;
    BoundaryFn fixed = rescale_to_admissible(cfg.phi);  // throws if the shape is hopeless
    log << "warning: phi rescaled to Z=" << fmt12(fixed.scale()) << " to satisfy admissibility\n";
    return fixed;
}

GridSpec grid_for(const RunConfig& cfg, int k, double eta_min) {
    if (cfg.grid_auto) return auto_grid(k, eta_min);
    GridSpec g;
    g.N = aspect_from_k(k);
    g.nx = cfg.nx;
    g.ny = cfg.ny;
    return g;
}

int jobs_for(const RunConfig& cfg) {
    if (const char* env = std::getenv("NODALSPLIT_JOBS")) {
        const int j = std::atoi(env);
        if (j > 0) return j;
    }
    if (cfg.jobs > 0) return cfg.jobs;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string opt_str(const std::optional<double>& v) { return v ? fmt12(*v) : ""; }

} // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const size_t n = x.size();
    for (size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SweepRow compute_sweep_row(const RunConfig& cfg, int k, double eta, std::ostream* log) {
    SweepRow row;
    row.k = k;
    row.eta = eta;
    const DomainSpec spec = make_domain(k, eta);
    const BoundaryFn phi = cfg.phi;
    const auto var = variation_analysis(phi, k);
    row.Z = phi.scale();
    row.a = var.d.a; row.b = var.d.b; row.c = var.d.c;
    row.mu_dot = var.mu_dot; row.gamma_dot = var.gamma_dot;
    row.c1 = var.c1; row.c2 = var.c2;
    row.m_k = m_k(k, spec.N);
    if (k % 2 == 0) row.y_bar = crossing_height(spec, var.c1, var.c2);

    const GridSpec grid = grid_for(cfg, k, *std::min_element(cfg.eta_list.begin(), cfg.eta_list.end()));
    row.nx = grid.nx;
    row.ny = grid.ny;
    if (static_cast<long long>(grid.nx) * grid.ny > 4'000'000)
        throw ResolutionError("grid exceeds the 4e6 node memory guard");

    BranchPair pair = solve_branches(spec, phi, grid, cfg.seed);
    row.mu = pair.upper.value;
    row.gamma = pair.lower.value;
    row.split = row.mu - row.gamma;
    row.residual_upper = pair.upper.residual;
    row.residual_lower = pair.lower.residual;

    const int j_max = std::min(16, grid.ny / 4);
    auto modes_v = extract_modes(pair.upper.field, pair.upper.value, j_max);
    auto summary = fit_amplitudes(modes_v, pair.upper.field, spec, phi);
    row.a1 = summary.a1;
    row.a2 = summary.a2;
    const double sN = std::sqrt(spec.N);
    row.dev_a1 = std::abs(summary.a1 - 2.0 * var.c1 / sN);
    row.dev_a2 = std::abs(summary.a2 - 2.0 * var.c2 / sN);
    row.error_tail = summary.error_tail;

    row.count_v = count_domains(pair.upper.field);
    row.count_w = count_domains(pair.lower.field);

    double max_angle_err = 0.0;
    bool have_angle = false;
    auto curves_v = marching_squares(pair.upper.field);
    auto curves_w = marching_squares(pair.lower.field);
    for (const auto* curves : {&curves_v, &curves_w}) {
        for (const auto& ang : boundary_angles(*curves, spec, phi, grid)) {
            max_angle_err = std::max(max_angle_err, std::abs(ang.angle_deg - 90.0));
            have_angle = true;
        }
    }
    if (have_angle) row.max_angle_error_deg = max_angle_err;

    const double h = std::max(grid.hx(), grid.hy());
    Region inset{h, spec.N - h, h, 1.0 - h};
    try {
        row.min_curve_gap_w = curve_gap(curves_w, inset);
    } catch (const InsufficientCurvesError&) {
    }

    if (k % 2 == 0 && eta > 0.0) {
        try {
            auto fit = fit_hyperbola(pair.upper.field, spec, var.c1, var.c2, pair.upper.value);
            row.gap = fit.gap;
            row.gap_geometry_resolved = fit.geometry_resolved;
        } catch (const GapUnresolvableError& e) {
            if (log) *log << "k=" << k << " eta=" << eta << ": " << e.what() << "\n";
        } catch (const DegenerateModelError& e) {
            if (log) *log << "k=" << k << " eta=" << eta << ": " << e.what() << "\n";
        }
    }
    return row;
}

int run_analyze(const RunConfig& cfg, std::ostream& log) {
    BoundaryFn phi;
    try {
        phi = resolve_phi(cfg, log);
    } catch (const InadmissibleShapeError& e) {
        const auto rep = check_admissible(cfg.phi);
        log << "inadmissible phi: " << e.what() << "\n"
            << "  endpoints_ok=" << rep.endpoints_ok << " range_ok=" << rep.range_ok
            << " lambda_phi=" << fmt12(rep.lambda_phi) << "\n";
        return 2;
    }
    fs::create_directories(cfg.output_dir);
    std::ofstream csv(fs::path(cfg.output_dir) / "analysis.csv");
    csv << "# config=" << hash_hex(cfg.hash) << "\n";
    csv << "k,Z,a,b,c,mu_dot,gamma_dot,c1,c2,y_bar,m_k,count_v,count_w\n";
    for (int k : cfg.k_list) {
        const DomainSpec spec = make_domain(k, 0.0);
        const auto var = variation_analysis(phi, k);
        const auto pred = predict_nodal(spec, phi);
        csv << k << ',' << fmt12(phi.scale()) << ',' << fmt12(var.d.a) << ',' << fmt12(var.d.b)
            << ',' << fmt12(var.d.c) << ',' << fmt12(var.mu_dot) << ',' << fmt12(var.gamma_dot)
            << ',' << fmt12(var.c1) << ',' << fmt12(var.c2) << ','
            << (pred.y_bar ? fmt12(*pred.y_bar) : std::string{}) << ',' << fmt12(pred.m_k) << ','
            << pred.grid_count_v << ',' << pred.grid_count_w << "\n";
        if (!pred.predictor_consistent)
            log << "note: k=" << k << " analytic/grid count mismatch (v " << pred.domain_count_v
                << "/" << pred.grid_count_v << ", w " << pred.domain_count_w << "/"
                << pred.grid_count_w << ")\n";

        GridSpec plot_grid;
        plot_grid.N = spec.N;
        plot_grid.ny = 512;
        plot_grid.nx = static_cast<int>(std::ceil(512 * spec.N));
        for (bool upper : {true, false}) {
            Field2D f = upper ? sample_v0(spec, var.c1, var.c2, plot_grid)
                              : sample_w0(spec, var.c1, var.c2, plot_grid);
            auto curves = marching_squares(f);
            std::ostringstream name;
            name << (upper ? "v0" : "w0") << "_k" << k << ".svg";
            write_nodal_svg((fs::path(cfg.output_dir) / name.str()).string(), spec, phi, curves,
                            std::nullopt, name.str());
        }
        log << "k=" << k << ": c1=" << fmt12(var.c1) << " c2=" << fmt12(var.c2) << " counts v/w "
            << pred.grid_count_v << "/" << pred.grid_count_w << "\n";
    }
    return 0;
}

int run_solve(const RunConfig& cfg, std::ostream& log) {
    const BoundaryFn phi = resolve_phi(cfg, log);
    RunConfig local = cfg;
    local.phi = phi;
    fs::create_directories(cfg.output_dir);
    std::ofstream csv(fs::path(cfg.output_dir) / "solve.csv");
    csv << "# config=" << hash_hex(cfg.hash) << "\n";
    csv << "k,eta,nx,ny,mu,gamma,split,residual_upper,residual_lower\n";
    for (int k : cfg.k_list) {
        for (double eta : cfg.eta_list) {
            const DomainSpec spec = make_domain(k, eta);
            const GridSpec grid = grid_for(cfg, k, eta);
            BranchPair pair = solve_branches(spec, phi, grid, cfg.seed);
            csv << k << ',' << fmt12(eta) << ',' << grid.nx << ',' << grid.ny << ','
                << fmt12(pair.upper.value) << ',' << fmt12(pair.lower.value) << ','
                << fmt12(pair.upper.value - pair.lower.value) << ','
                << fmt12(pair.upper.residual) << ',' << fmt12(pair.lower.residual) << "\n";
            if (cfg.dump_fields) {
                std::ostringstream base;
                base << "field_k" << k << "_eta" << fmt12(eta);
                write_field_dump((fs::path(cfg.output_dir) / (base.str() + "_upper.nspl")).string(),
                                 pair.upper.field, k, eta);
                write_field_dump((fs::path(cfg.output_dir) / (base.str() + "_lower.nspl")).string(),
                                 pair.lower.field, k, eta);
            }
            log << "k=" << k << " eta=" << fmt12(eta) << ": mu=" << fmt12(pair.upper.value)
                << " gamma=" << fmt12(pair.lower.value) << "\n";
        }
    }
    return 0;
}

int run_sweep(const RunConfig& cfg, std::ostream& log) {
    if (cfg.eta_list.empty()) {
        log << "warning: empty eta_list, nothing to sweep\n";
        return 0;
    }
    const BoundaryFn phi = resolve_phi(cfg, log);
    RunConfig local = cfg;
    local.phi = phi;
    for (int k : cfg.k_list) {
        const double guard = eta_crossing_guard(aspect_from_k(k));
        for (double eta : cfg.eta_list)
            if (eta >= guard || eta > cfg.eta_max)
                throw ConfigError("eta=" + std::to_string(eta) +
                                  " violates the crossing guard or eta_max for k=" + std::to_string(k));
    }
    fs::create_directories(cfg.output_dir);

    struct Task { int k; double eta; };
    std::vector<Task> tasks;
    for (int k : cfg.k_list)
        for (double eta : cfg.eta_list) tasks.push_back({k, eta});
    std::vector<SweepRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            try {
                std::ostringstream rowlog;
                rows[i] = compute_sweep_row(local, tasks[i].k, tasks[i].eta, &rowlog);
                std::lock_guard<std::mutex> lk(log_mutex);
                log << rowlog.str();
            } catch (const std::exception& e) {
                rows[i].k = tasks[i].k;
                rows[i].eta = tasks[i].eta;
                rows[i].status = e.what();
                std::lock_guard<std::mutex> lk(log_mutex);
                log << "row k=" << tasks[i].k << " eta=" << tasks[i].eta << " failed: " << e.what()
                    << "\n";
            }
        }
    };
    const int jobs = std::min<int>(jobs_for(cfg), static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::ofstream csv(fs::path(cfg.output_dir) / "sweep.csv");
    csv << "# config=" << hash_hex(cfg.hash) << "\n";
    csv << "k,eta,nx,ny,status,Z,a,b,c,mu_dot,gamma_dot,c1,c2,y_bar,m_k,mu,gamma,split,"
           "residual_upper,residual_lower,a1,a2,dev_a1,dev_a2,error_tail,count_v,count_w,gap,"
           "gap_geometry_resolved,min_curve_gap_w,max_angle_error_deg\n";
    for (const auto& r : rows) {
        csv << r.k << ',' << fmt12(r.eta) << ',' << r.nx << ',' << r.ny << ',' << r.status << ','
            << fmt12(r.Z) << ',' << fmt12(r.a) << ',' << fmt12(r.b) << ',' << fmt12(r.c) << ','
            << fmt12(r.mu_dot) << ',' << fmt12(r.gamma_dot) << ',' << fmt12(r.c1) << ','
            << fmt12(r.c2) << ',' << opt_str(r.y_bar) << ',' << fmt12(r.m_k) << ',' << fmt12(r.mu)
            << ',' << fmt12(r.gamma) << ',' << fmt12(r.split) << ',' << fmt12(r.residual_upper)
            << ',' << fmt12(r.residual_lower) << ',' << fmt12(r.a1) << ',' << fmt12(r.a2) << ','
            << fmt12(r.dev_a1) << ',' << fmt12(r.dev_a2) << ',' << fmt12(r.error_tail) << ','
            << r.count_v << ',' << r.count_w << ',' << opt_str(r.gap) << ','
            << (r.gap_geometry_resolved ? 1 : 0) << ',' << opt_str(r.min_curve_gap_w) << ','
            << opt_str(r.max_angle_error_deg) << "\n";
    }

    // fitted log-log slopes per k
    json rates = json::object();
    rates["config_hash"] = hash_hex(cfg.hash);
    for (int k : cfg.k_list) {
        std::vector<double> etas, splits, gaps, geta, d1, d2, e1;
        for (const auto& r : rows) {
            if (r.k != k || r.status != "ok") continue;
            if (r.eta <= 0) continue;
            etas.push_back(r.eta);
            splits.push_back(std::max(r.split, 1e-300));
            d1.push_back(std::max(r.dev_a1, 1e-300));
            d2.push_back(std::max(r.dev_a2, 1e-300));
            if (r.gap) { gaps.push_back(*r.gap); geta.push_back(r.eta); }
        }
        if (etas.size() < 2) continue;
        json jk;
        jk["slope_split"] = loglog_slope(etas, splits);
        jk["slope_a1_dev"] = loglog_slope(etas, d1);
        jk["slope_a2_dev"] = loglog_slope(etas, d2);
        if (geta.size() >= 2) jk["slope_gap"] = loglog_slope(geta, gaps);
        rates["k" + std::to_string(k)] = jk;
    }
    std::ofstream rf(fs::path(cfg.output_dir) / "rates.json");
    rf << rates.dump(2) << "\n";
    return 0;
}

int run_figures(const RunConfig& cfg, std::ostream& log) {
    fs::create_directories(cfg.output_dir);
    struct Panel { const char* file; const char* preset; int k; bool upper; };
    const Panel panels[] = {
        {"fig_v0_bump_k6.svg", "bump", 6, true},   {"fig_v0_bump_k7.svg", "bump", 7, true},
        {"fig_w0_bump_k8.svg", "bump", 8, false},  {"fig_w0_skew24_k5.svg", "skew24", 5, false},
        {"fig_w0_skew24_k6.svg", "skew24", 6, false}, {"fig_w0_skew24_k7.svg", "skew24", 7, false},
        {"fig_w0_skew8_k5.svg", "skew8", 5, false},   {"fig_w0_skew8_k6.svg", "skew8", 6, false},
        {"fig_w0_skew8_k7.svg", "skew8", 7, false},
    };
    for (const auto& p : panels) {
        const BoundaryFn phi = rescale_to_admissible(BoundaryFn::preset(p.preset));
        const DomainSpec spec = make_domain(p.k, 0.0);
        const auto var = variation_analysis(phi, p.k);
        GridSpec g;
        g.N = spec.N;
        g.ny = 512;
        g.nx = static_cast<int>(std::ceil(512 * spec.N));
        Field2D f = p.upper ? sample_v0(spec, var.c1, var.c2, g)
                            : sample_w0(spec, var.c1, var.c2, g);
        write_nodal_svg((fs::path(cfg.output_dir) / p.file).string(), spec, phi,
                        marching_squares(f), std::nullopt, p.file);
        log << "wrote " << p.file << "\n";
    }
    return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& log) {
    fs::create_directories(cfg.output_dir);
    AcceptanceOptions opt;
    opt.seed = cfg.seed;
    opt.out_dir = cfg.output_dir;
    const auto results = run_acceptance(opt, log);
    write_verify_report((fs::path(cfg.output_dir) / "verify_report.json").string(), results,
                        hash_hex(cfg.hash));
    bool all = true;
    for (const auto& r : results) all = all && (r.pass || r.skipped);
    return all ? 0 : 1;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
    if (cfg.command == "analyze") return run_analyze(cfg, log);
    if (cfg.command == "solve") return run_solve(cfg, log);
    if (cfg.command == "sweep") return run_sweep(cfg, log);
    if (cfg.command == "figures") return run_figures(cfg, log);
    if (cfg.command == "verify") return run_verify(cfg, log);
    throw ConfigError("unknown command: " + cfg.command);
}

} // namespace nodalsplit
