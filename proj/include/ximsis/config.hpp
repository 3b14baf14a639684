#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ximsis/experiment.hpp"
#include "ximsis/simulate.hpp"

namespace ximsis {

// Scenario files are plain `key = value` text, one pair per line, with `#`
// comments. Recognized keys:
//
//   model      cox | transformation | aft | nonlinear   (required)
//   n, p       sample size / dimension                  (required)
//   target_cr  censoring rate in (0,1)                  (required)
//   covariance ar1 | cs          (default: model's benchmark structure)
//   rho        correlation      (default: model's benchmark value)
//   beta       sparse "idx:coef,idx:coef" with 1-based idx
//              (cox/transformation only; default: benchmark coefficients)
//   h0         baseline hazard, cox only (default 0.5)
//   reps       replications (default 500)
//   seed       base seed (default 0)
//
// The defaults reproduce the four benchmark designs, so a minimal file is
// just model/n/p/target_cr.
struct ScenarioConfig {
    SimScenario scenario;
    std::int32_t reps = 500;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

inline std::vector<std::pair<std::int32_t, double>> parse_beta(const std::string& text) {
    std::vector<std::pair<std::int32_t, double>> beta;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("malformed beta entry '" + item + "'");
        const int idx = std::stoi(trim(item.substr(0, colon)));
        if (idx < 1) throw std::runtime_error("beta index must be 1-based");
        beta.emplace_back(idx - 1, std::stod(trim(item.substr(colon + 1))));
    }
    return beta;
}

} // namespace detail

inline ScenarioConfig parse_scenario_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    const auto require = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw std::runtime_error("config missing key '" + key + "'");
        return it->second;
    };

    ScenarioConfig cfg;
    const std::string model = require("model");
    const std::int32_t n = std::stoi(require("n"));
    const std::int32_t p = std::stoi(require("p"));
    const double cr = std::stod(require("target_cr"));
    const std::uint64_t seed = kv.count("seed") ? std::stoull(kv.at("seed")) : 0;

    if (model == "cox") cfg.scenario = example1_scenario(n, cr, seed, p);
    else if (model == "transformation") cfg.scenario = example2_scenario(n, cr, seed, p);
    else if (model == "aft") cfg.scenario = example3_scenario(n, cr, seed, p);
    else if (model == "nonlinear") cfg.scenario = example4_scenario(n, cr, seed, p);
    else throw std::runtime_error("unknown model '" + model + "'");

    if (kv.count("covariance")) {
        const std::string& cov = kv.at("covariance");
        if (cov == "ar1") cfg.scenario.covariance = CovarianceKind::Ar1;
        else if (cov == "cs") cfg.scenario.covariance = CovarianceKind::CompoundSymmetry;
        else throw std::runtime_error("unknown covariance '" + cov + "'");
    }
    if (kv.count("rho")) cfg.scenario.rho = std::stod(kv.at("rho"));
    if (kv.count("h0")) cfg.scenario.baseline_hazard = std::stod(kv.at("h0"));
    if (kv.count("beta")) {
        if (model != "cox" && model != "transformation")
            throw std::runtime_error("beta is only configurable for cox/transformation");
        cfg.scenario.beta = detail::parse_beta(kv.at("beta"));
    }
    if (kv.count("reps")) cfg.reps = std::stoi(kv.at("reps"));
    cfg.scenario.validate();
    if (cfg.reps < 1) throw std::runtime_error("reps must be positive");
    return cfg;
}

inline ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file '" + path + "'");
    return parse_scenario_config(in);
}

} // namespace ximsis
