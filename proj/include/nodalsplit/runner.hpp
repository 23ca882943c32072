#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nodalsplit/config.hpp"

namespace nodalsplit {

struct SweepRow {
    int k = 0;
    double eta = 0.0;
    int nx = 0, ny = 0;
    std::string status = "ok";
    // variation analysis
    double Z = 0, a = 0, b = 0, c = 0, mu_dot = 0, gamma_dot = 0, c1 = 0, c2 = 0;
    std::optional<double> y_bar;
    double m_k = 0;
    // solved branches
    double mu = 0, gamma = 0, split = 0;
    double residual_upper = 0, residual_lower = 0;
    // modes
    double a1 = 0, a2 = 0, dev_a1 = 0, dev_a2 = 0, error_tail = 0;
    // nodal metrics
    int count_v = 0, count_w = 0;
    std::optional<double> gap;
    bool gap_geometry_resolved = false;
    std::optional<double> min_curve_gap_w;
    std::optional<double> max_angle_error_deg;
};

int run_analyze(const RunConfig& cfg, std::ostream& log);
int run_solve(const RunConfig& cfg, std::ostream& log);
int run_sweep(const RunConfig& cfg, std::ostream& log);
int run_figures(const RunConfig& cfg, std::ostream& log);
int run_verify(const RunConfig& cfg, std::ostream& log);
int run_command(const RunConfig& cfg, std::ostream& log);

// one sweep row end to end: solve, modes, nodal metrics
SweepRow compute_sweep_row(const RunConfig& cfg, int k, double eta, std::ostream* log);

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace nodalsplit
