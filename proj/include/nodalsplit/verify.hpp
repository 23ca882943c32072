#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nodalsplit {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    bool skipped = false;
    double seconds = 0.0;
    std::string details;
};

struct AcceptanceOptions {
    uint64_t seed = 20240601;
    std::string out_dir;
};

// runs the ten acceptance criteria, printing one pass/fail line per
// criterion to the log stream
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

void write_verify_report(const std::string& path, const std::vector<CriterionResult>& results,
                         const std::string& config_hash);

} // namespace nodalsplit
