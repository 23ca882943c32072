#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nodalsplit/boundary.hpp"

namespace nodalsplit {

struct RunConfig {
    std::string command;  // analyze | solve | sweep | figures | verify
    BoundaryFn phi = BoundaryFn::bump(1.0 / 6.0);
    std::vector<int> k_list{4};
    std::vector<double> eta_list{1e-3};
    bool grid_auto = true;
    int nx = 0, ny = 0;  // used when grid_auto is false
    std::string output_dir = "out";
    uint64_t seed = 20240601;
    int jobs = 0;  // 0: hardware concurrency
    double eta_max = 0.05;
    bool dump_fields = false;
    uint64_t hash = 0;  // canonical config hash, filled by the parser
};

// parse a JSON config document; CLI flags may override scalar fields later
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// serialize back to canonical JSON (sorted keys)
std::string canonical_config(const RunConfig& cfg);

BoundaryFn phi_from_json_text(const std::string& text);
std::string phi_to_json_text(const BoundaryFn& phi);

} // namespace nodalsplit
