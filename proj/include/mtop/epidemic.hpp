#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mtop/bandit.hpp"

namespace mtop {

inline constexpr int kNumAgeGroups = 5;
inline constexpr int kNumContexts = 5;

inline constexpr std::array<std::string_view, kNumAgeGroups> kAgeGroupNames = {
    "children", "youngsters", "young_adults", "adults", "elderly"};

// Context order is fixed: primary school, secondary school, tertiary
// education, workplace, community.
inline constexpr std::array<std::string_view, kNumContexts> kContextNames = {
    "primary_school", "secondary_school", "tertiary", "work", "community"};

// contacts[i][j]: mean daily contacts of a group-i individual with group-j
// individuals in one context.
using ContactMatrix = std::array<std::array<double, kNumAgeGroups>, kNumAgeGroups>;

enum class VaccineType : int { None = 0, Mrna = 1, VectorBased = 2 };

std::string_view vaccine_type_name(VaccineType t);
VaccineType parse_vaccine_type(std::string_view s);

// One arm of the vaccine bandit: a vaccine type (or none) per age group.
struct VaccineStrategy {
    std::array<VaccineType, kNumAgeGroups> assignment{};

    // Base-3 code with the children group as the least significant digit
    // (none = 0, mrna = 1, vector = 2).
    int encode() const;
    static VaccineStrategy decode(int code);

    // Valid arms must use both vaccine types at least once.
    bool uses_both_types() const;

    std::string label() const;  // e.g. "NMVNN"

    friend bool operator==(const VaccineStrategy&, const VaccineStrategy&) = default;
};

// All 3^5 assignments filtered to those using both vaccine types, ordered by
// base-3 code. Always 180 entries.
std::vector<VaccineStrategy> enumerate_strategies();

struct VaccineProfile {
    double ve_susceptibility = 0.0;
    double ve_infectiousness = 0.0;
    double ve_disease = 0.0;
    int activation_days = 42;

    // Linear ramp from dose day to full protection.
    double activation(long long days_since_dose) const {
        if (days_since_dose <= 0) {
            return 0.0;
        }
        const double a = static_cast<double>(days_since_dose) / activation_days;
        return a < 1.0 ? a : 1.0;
    }
};

enum class Objective { InfectionAttackRate, HospitalizationAttackRate };

Objective parse_objective(std::string_view s);  // "ari" | "arh"
std::string_view objective_name(Objective o);

struct EpidemicConfig {
    int population = 10000;
    std::array<double, kNumAgeGroups> group_fractions{};
    std::array<ContactMatrix, kNumContexts> contacts{};
    std::array<double, kNumContexts> contact_reductions{};
    double transmission_probability = 0.0;
    double latent_days = 3.0;
    double infectious_days = 7.0;
    std::array<double, kNumAgeGroups> hospitalization_prob{};
    double initial_recovered_fraction = 0.0;
    double initial_infected_fraction = 0.0;
    VaccineProfile mrna;
    VaccineProfile vector_based;
    // Weekly deliveries as fractions of the total population; week w covers
    // days 7w+1 .. 7w+7.
    std::vector<double> weekly_mrna_per_capita;
    std::vector<double> weekly_vector_per_capita;
    int horizon_days = 120;

    void validate() const;  // throws ConfigError

    std::array<long long, kNumAgeGroups> group_sizes() const;
    ContactMatrix effective_contacts() const;
};

struct GroupDay {
    long long susceptible = 0;
    long long exposed = 0;
    long long infectious = 0;
    long long recovered = 0;
    long long vaccinated_mrna = 0;    // cumulative doses administered
    long long vaccinated_vector = 0;  // cumulative doses administered
    long long hospitalized_cum = 0;
};

struct DayRecord {
    int day = 0;
    std::array<GroupDay, kNumAgeGroups> groups{};
};

struct SimOutcome {
    double attack_rate_infections = 0.0;       // ARI
    double attack_rate_hospitalizations = 0.0;  // ARH
    long long cumulative_infections = 0;
    long long cumulative_hospitalizations = 0;
    long long discarded_doses = 0;  // supply that found no unvaccinated recipient
    std::vector<DayRecord> daily;   // day 0 (initial state) .. horizon

    void write_csv(std::ostream& os) const;
};

// Daily-step chain-binomial age-structured S->E->I->R process with
// cohort-level vaccination tracking. Pure function of (config, strategy,
// seed); safe to run many instances in parallel.
SimOutcome simulate_epidemic(const EpidemicConfig& config, const VaccineStrategy& strategy,
                             std::uint64_t seed);

double epidemic_reward(const SimOutcome& outcome, Objective objective);

inline constexpr std::array<std::string_view, 6> kScenarioNames = {
    "Baseline", "Relaxed", "TertiaryEducation", "SecondarySchools",
    "RelaxedCommunity", "RelaxedWorkplace"};

// Contact reductions (c_p, c_s, c_t, c_w, c_c) for a named scenario.
// Throws ConfigError for unknown names.
std::array<double, kNumContexts> scenario_reductions(std::string_view name);

EpidemicConfig apply_scenario(EpidemicConfig base, std::string_view name);

// Bandit over a set of vaccine strategies; each pull runs one simulation
// seeded from the caller's stream and rewards 1 - ARI (or 1 - ARH).
class EpidemicBandit : public Environment {
  public:
    EpidemicBandit(EpidemicConfig config, std::vector<VaccineStrategy> arms,
                   Objective objective, int m);

    const EnvironmentDescriptor& descriptor() const override { return descriptor_; }
    Reward pull(int arm, Rng& rng) override;

    const EpidemicConfig& config() const { return config_; }
    Objective objective() const { return objective_; }
    const VaccineStrategy& strategy(int arm) const;

  private:
    EpidemicConfig config_;
    std::vector<VaccineStrategy> arms_;
    Objective objective_;
    EnvironmentDescriptor descriptor_;
};

}  // namespace mtop
