#include "nodalsplit/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nodalsplit {

using nlohmann::json;

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

BoundaryFn phi_from_json(const json& j) {
    if (j.is_string()) return BoundaryFn::preset(j.get<std::string>());
    if (!j.is_object()) throw ConfigError("phi must be an object or a preset name");
    const std::string family = j.value("family", "polynomial");
    const double scale = j.value("scale", 1.0);
    if (family == "polynomial") {
        if (!j.contains("coefficients"))
            throw ConfigError("polynomial phi requires \"coefficients\"");
        return BoundaryFn::polynomial(j.at("coefficients").get<std::vector<double>>(), scale);
    }
    return BoundaryFn::preset(family, scale);
}

json phi_to_json(const BoundaryFn& phi) {
    json j;
    if (!phi.preset_name().empty()) {
        j["family"] = phi.preset_name();
    } else {
        j["family"] = "polynomial";
    }
    j["coefficients"] = phi.shape_coeffs();
    j["scale"] = phi.scale();
    return j;
}

RunConfig from_json(const json& j, const std::string& origin) {
    RunConfig cfg;
    if (j.contains("command")) cfg.command = j.at("command").get<std::string>();
    if (j.contains("phi")) cfg.phi = phi_from_json(j.at("phi"));
    if (j.contains("k_list")) cfg.k_list = j.at("k_list").get<std::vector<int>>();
    if (j.contains("eta_list")) cfg.eta_list = j.at("eta_list").get<std::vector<double>>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.is_string()) {
            if (g.get<std::string>() != "auto")
                throw ConfigError(origin + ": grid must be \"auto\" or {nx, ny}");
            cfg.grid_auto = true;
        } else {
            cfg.grid_auto = false;
            cfg.nx = g.at("nx").get<int>();
            cfg.ny = g.at("ny").get<int>();
        }
    }
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("eta_max")) cfg.eta_max = j.at("eta_max").get<double>();
    if (j.contains("dump_fields")) cfg.dump_fields = j.at("dump_fields").get<bool>();
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["phi"] = phi_to_json(cfg.phi);
    j["k_list"] = cfg.k_list;
    j["eta_list"] = cfg.eta_list;
    if (cfg.grid_auto) {
        j["grid"] = "auto";
    } else {
        j["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}};
    }
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    j["jobs"] = cfg.jobs;
    j["eta_max"] = cfg.eta_max;
    j["dump_fields"] = cfg.dump_fields;
    return j;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    try {
        RunConfig cfg = from_json(j, origin);
        cfg.hash = fnv1a(canonical_config(cfg));
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::string canonical_config(const RunConfig& cfg) { return to_json(cfg).dump(); }

BoundaryFn phi_from_json_text(const std::string& text) {
    return phi_from_json(json::parse(text));
}

std::string phi_to_json_text(const BoundaryFn& phi) { return phi_to_json(phi).dump(); }

} // namespace nodalsplit
