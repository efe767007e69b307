#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mtop/epidemic.hpp"
#include "mtop/synthetic.hpp"
#include "mtop/toml_lite.hpp"

namespace mtop {

// Fully resolved environment description: config file plus any command-line
// overrides. Fresh Environment instances are built per run so parallel runs
// never share mutable state.
struct EnvironmentConfig {
    std::string type = "synthetic";  // "synthetic" | "epidemic"
    int m = 1;

    std::vector<SyntheticArmSpec> synthetic_arms;

    EpidemicConfig epidemic;
    Objective objective = Objective::InfectionAttackRate;
    std::string scenario;         // named scenario applied last, "" = none
    std::vector<int> arms_subset; // epidemic arm indices; empty = all 180

    int num_arms() const;
    std::unique_ptr<Environment> make_environment() const;

    // Inline copy of the resolved configuration, embedded into every output
    // file for provenance.
    nlohmann::json to_json() const;
    std::string hash() const;  // FNV-1a of the canonical JSON dump
};

toml::Value parse_config_text(std::string_view text);
toml::Value parse_config_file(const std::string& path);

EnvironmentConfig load_environment_config(const toml::Value& root);
EnvironmentConfig default_environment_config();

EpidemicConfig load_epidemic_config(const toml::Value& root);
EpidemicConfig default_epidemic_config();

// Table-1 scenario on top of the default configuration.
EpidemicConfig scenario_config(std::string_view name);

// "3,7,12" and "0-11" style index lists (inclusive ranges), validated
// against [0, max_exclusive).
std::vector<int> parse_index_set(std::string_view text, int max_exclusive);

std::string fnv1a_hex(std::string_view text);

}  // namespace mtop
