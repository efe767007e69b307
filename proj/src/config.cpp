#include "mtop/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mtop/default_config_toml.hpp"
#include "mtop/errors.hpp"

namespace mtop {

namespace {

std::array<double, kNumAgeGroups> as_group_array(const toml::Value& v, std::string_view path) {
    const std::vector<double> values = v.as_number_array(path);
    if (values.size() != kNumAgeGroups) {
        throw ConfigError("config: '" + std::string(path) + "' must have 5 entries");
    }
    std::array<double, kNumAgeGroups> out{};
    std::copy(values.begin(), values.end(), out.begin());
    return out;
}

ContactMatrix as_contact_matrix(const toml::Value& v, std::string_view path) {
    const toml::Array& rows = v.as_array(path);
    if (rows.size() != kNumAgeGroups) {
        throw ConfigError("config: contact matrix '" + std::string(path) + "' must have 5 rows");
    }
    ContactMatrix m{};
    for (int i = 0; i < kNumAgeGroups; ++i) {
        const std::vector<double> row = rows[static_cast<std::size_t>(i)].as_number_array(path);
        if (row.size() != kNumAgeGroups) {
            throw ConfigError("config: contact matrix '" + std::string(path) +
                              "' must have 5 columns per row");
        }
        std::copy(row.begin(), row.end(), m[i].begin());
    }
    return m;
}

VaccineProfile load_vaccine_profile(const toml::Value& v, std::string_view path) {
    VaccineProfile p;
    p.ve_susceptibility = v.at("ve_susceptibility").as_number(path);
    p.ve_infectiousness = v.at("ve_infectiousness").as_number(path);
    p.ve_disease = v.at("ve_disease").as_number(path);
    p.activation_days = static_cast<int>(v.at("activation_days").as_integer(path));
    return p;
}

nlohmann::json matrix_to_json(const ContactMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : m) {
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

toml::Value parse_config_text(std::string_view text) {
    return toml::parse(text);
}

toml::Value parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return toml::parse(buffer.str());
}

EpidemicConfig load_epidemic_config(const toml::Value& root) {
    const toml::Value& epi = root.at("epidemic");
    EpidemicConfig config;
    config.population = static_cast<int>(epi.at("population").as_integer("epidemic.population"));
    config.group_fractions = as_group_array(epi.at("group_fractions"), "epidemic.group_fractions");
    config.transmission_probability =
        epi.at("transmission_probability").as_number("epidemic.transmission_probability");
    config.latent_days = epi.at("latent_days").as_number("epidemic.latent_days");
    config.infectious_days = epi.at("infectious_days").as_number("epidemic.infectious_days");
    config.hospitalization_prob =
        as_group_array(epi.at("hospitalization_prob"), "epidemic.hospitalization_prob");
    config.initial_recovered_fraction =
        epi.at("initial_recovered_fraction").as_number("epidemic.initial_recovered_fraction");
    config.initial_infected_fraction =
        epi.at("initial_infected_fraction").as_number("epidemic.initial_infected_fraction");
    config.horizon_days = static_cast<int>(epi.at("horizon_days").as_integer("epidemic.horizon_days"));

    const toml::Value& contacts = epi.at("contacts");
    for (int c = 0; c < kNumContexts; ++c) {
        config.contacts[c] = as_contact_matrix(contacts.at(kContextNames[c]),
                                               std::string("epidemic.contacts.") +
                                                   std::string(kContextNames[c]));
    }
    const toml::Value& reductions = epi.at("contact_reductions");
    for (int c = 0; c < kNumContexts; ++c) {
        config.contact_reductions[c] =
            reductions.at(kContextNames[c]).as_number("epidemic.contact_reductions");
    }
    if (epi.contains("scenario")) {
        const std::string& scenario = epi.at("scenario").as_string("epidemic.scenario");
        if (!scenario.empty()) {
            config.contact_reductions = scenario_reductions(scenario);
        }
    }

    const toml::Value& vaccines = epi.at("vaccines");
    config.mrna = load_vaccine_profile(vaccines.at("mrna"), "epidemic.vaccines.mrna");
    config.vector_based = load_vaccine_profile(vaccines.at("vector"), "epidemic.vaccines.vector");

    const toml::Value& supply = epi.at("supply");
    config.weekly_mrna_per_capita =
        supply.at("weekly_mrna_per_capita").as_number_array("epidemic.supply.weekly_mrna_per_capita");
    config.weekly_vector_per_capita =
        supply.at("weekly_vector_per_capita")
            .as_number_array("epidemic.supply.weekly_vector_per_capita");

    config.validate();
    return config;
}

EnvironmentConfig load_environment_config(const toml::Value& root) {
    EnvironmentConfig env;
    const toml::Value& environment = root.at("environment");
    env.type = environment.at("type").as_string("environment.type");
    env.m = static_cast<int>(environment.at("m").as_integer("environment.m"));
    if (env.type == "synthetic") {
        const toml::Value& synthetic = root.at("synthetic");
        const std::vector<double> means = synthetic.at("means").as_number_array("synthetic.means");
        const std::vector<double> sds = synthetic.at("sds").as_number_array("synthetic.sds");
        if (means.size() != sds.size() || means.empty()) {
            throw ConfigError("config: synthetic means/sds must be non-empty and equal length");
        }
        std::vector<double> means2;
        std::vector<double> sds2;
        std::vector<double> weights;
        if (synthetic.contains("means2")) {
            means2 = synthetic.at("means2").as_number_array("synthetic.means2");
            sds2 = synthetic.at("sds2").as_number_array("synthetic.sds2");
            weights = synthetic.at("mixture_weights").as_number_array("synthetic.mixture_weights");
            if (means2.size() != means.size() || sds2.size() != means.size() ||
                weights.size() != means.size()) {
                throw ConfigError("config: synthetic second-mode arrays must match means length");
            }
        }
        for (std::size_t i = 0; i < means.size(); ++i) {
            SyntheticArmSpec spec;
            spec.mean = means[i];
            spec.sd = sds[i];
            if (!means2.empty()) {
                spec.mean2 = means2[i];
                spec.sd2 = sds2[i];
                spec.mixture_weight = weights[i];
            }
            spec.validate();
            env.synthetic_arms.push_back(spec);
        }
    } else if (env.type == "epidemic") {
        env.epidemic = load_epidemic_config(root);
        const toml::Value& epi = root.at("epidemic");
        if (epi.contains("objective")) {
            env.objective = parse_objective(epi.at("objective").as_string("epidemic.objective"));
        }
        if (epi.contains("scenario")) {
            env.scenario = epi.at("scenario").as_string("epidemic.scenario");
        }
    } else {
        throw ConfigError("config: environment.type must be 'synthetic' or 'epidemic'");
    }
    return env;
}

EnvironmentConfig default_environment_config() {
    return load_environment_config(parse_config_text(kDefaultConfigToml));
}

EpidemicConfig default_epidemic_config() {
    return load_epidemic_config(parse_config_text(kDefaultConfigToml));
}

EpidemicConfig scenario_config(std::string_view name) {
    return apply_scenario(default_epidemic_config(), name);
}

int EnvironmentConfig::num_arms() const {
    if (type == "synthetic") {
        return static_cast<int>(synthetic_arms.size());
    }
    if (!arms_subset.empty()) {
        return static_cast<int>(arms_subset.size());
    }
    return static_cast<int>(enumerate_strategies().size());
}

std::unique_ptr<Environment> EnvironmentConfig::make_environment() const {
    if (m < 1 || m >= num_arms()) {
        throw ConfigError("config: need 1 <= m < number of arms");
    }
    if (type == "synthetic") {
        return std::make_unique<SyntheticBandit>(synthetic_arms, m);
    }
    const std::vector<VaccineStrategy> all = enumerate_strategies();
    std::vector<VaccineStrategy> arms;
    if (arms_subset.empty()) {
        arms = all;
    } else {
        for (int index : arms_subset) {
            if (index < 0 || index >= static_cast<int>(all.size())) {
                throw ConfigError("config: arm subset index out of range");
            }
            arms.push_back(all[static_cast<std::size_t>(index)]);
        }
    }
    return std::make_unique<EpidemicBandit>(epidemic, std::move(arms), objective, m);
}

nlohmann::json EnvironmentConfig::to_json() const {
    nlohmann::json j;
    j["environment"]["type"] = type;
    j["environment"]["m"] = m;
    if (type == "synthetic") {
        nlohmann::json arms = nlohmann::json::array();
        for (const SyntheticArmSpec& spec : synthetic_arms) {
            nlohmann::json arm;
            arm["mean"] = spec.mean;
            arm["sd"] = spec.sd;
            if (spec.mixture_weight > 0.0) {
                arm["mean2"] = spec.mean2;
                arm["sd2"] = spec.sd2;
                arm["mixture_weight"] = spec.mixture_weight;
            }
            arms.push_back(arm);
        }
        j["synthetic"]["arms"] = arms;
        return j;
    }
    nlohmann::json epi;
    epi["population"] = epidemic.population;
    epi["group_fractions"] = epidemic.group_fractions;
    epi["transmission_probability"] = epidemic.transmission_probability;
    epi["latent_days"] = epidemic.latent_days;
    epi["infectious_days"] = epidemic.infectious_days;
    epi["hospitalization_prob"] = epidemic.hospitalization_prob;
    epi["initial_recovered_fraction"] = epidemic.initial_recovered_fraction;
    epi["initial_infected_fraction"] = epidemic.initial_infected_fraction;
    epi["horizon_days"] = epidemic.horizon_days;
    for (int c = 0; c < kNumContexts; ++c) {
        epi["contact_reductions"][std::string(kContextNames[c])] = epidemic.contact_reductions[c];
        epi["contacts"][std::string(kContextNames[c])] = matrix_to_json(epidemic.contacts[c]);
    }
    auto profile_json = [](const VaccineProfile& p) {
        nlohmann::json v;
        v["ve_susceptibility"] = p.ve_susceptibility;
        v["ve_infectiousness"] = p.ve_infectiousness;
        v["ve_disease"] = p.ve_disease;
        v["activation_days"] = p.activation_days;
        return v;
    };
    epi["vaccines"]["mrna"] = profile_json(epidemic.mrna);
    epi["vaccines"]["vector"] = profile_json(epidemic.vector_based);
    epi["supply"]["weekly_mrna_per_capita"] = epidemic.weekly_mrna_per_capita;
    epi["supply"]["weekly_vector_per_capita"] = epidemic.weekly_vector_per_capita;
    epi["objective"] = std::string(objective_name(objective));
    epi["scenario"] = scenario;
    if (!arms_subset.empty()) {
        epi["arms_subset"] = arms_subset;
    }
    j["epidemic"] = epi;
    return j;
}

std::string EnvironmentConfig::hash() const {
    return fnv1a_hex(to_json().dump());
}

std::vector<int> parse_index_set(std::string_view text, int max_exclusive) {
    std::vector<int> out;
    std::size_t pos = 0;
    auto parse_int = [&]() {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == start) {
            throw ConfigError("bad index list: " + std::string(text));
        }
        return std::stoi(std::string(text.substr(start, pos - start)));
    };
    while (pos < text.size()) {
        const int first = parse_int();
        int last = first;
        if (pos < text.size() && text[pos] == '-') {
            ++pos;
            last = parse_int();
        }
        if (first > last || first < 0 || last >= max_exclusive) {
            throw ConfigError("index list entry out of range: " + std::string(text));
        }
        for (int i = first; i <= last; ++i) {
            out.push_back(i);
        }
        if (pos < text.size()) {
            if (text[pos] != ',') {
                throw ConfigError("bad index list separator in: " + std::string(text));
            }
            ++pos;
        }
    }
    if (out.empty()) {
        throw ConfigError("empty index list");
    }
    return out;
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

}  // namespace mtop
