#include "mtop/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "mtop/errors.hpp"

namespace mtop {

namespace {

// Splits `total` into integer parts proportional to `weights` (largest
// remainder; remainder ties go to the lower index).
std::array<long long, kNumAgeGroups> apportion(long long total,
                                               const std::array<double, kNumAgeGroups>& weights) {
    const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::array<long long, kNumAgeGroups> parts{};
    if (total <= 0 || weight_sum <= 0.0) {
        return parts;
    }
    std::array<double, kNumAgeGroups> fractional{};
    long long assigned = 0;
    for (int g = 0; g < kNumAgeGroups; ++g) {
        const double share = static_cast<double>(total) * weights[g] / weight_sum;
        parts[g] = static_cast<long long>(std::floor(share));
        fractional[g] = share - std::floor(share);
        assigned += parts[g];
    }
    long long remainder = total - assigned;
    std::array<int, kNumAgeGroups> order = {0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (fractional[a] != fractional[b]) {
            return fractional[a] > fractional[b];
        }
        return a < b;
    });
    for (int k = 0; k < kNumAgeGroups && remainder > 0; ++k, --remainder) {
        ++parts[order[k]];
    }
    return parts;
}

}  // namespace

std::string_view vaccine_type_name(VaccineType t) {
    switch (t) {
        case VaccineType::None:
            return "none";
        case VaccineType::Mrna:
            return "mrna";
        case VaccineType::VectorBased:
            return "vector";
    }
    throw std::invalid_argument("vaccine_type_name: bad enum value");
}

VaccineType parse_vaccine_type(std::string_view s) {
    if (s == "none") {
        return VaccineType::None;
    }
    if (s == "mrna") {
        return VaccineType::Mrna;
    }
    if (s == "vector") {
        return VaccineType::VectorBased;
    }
    throw ConfigError("unknown vaccine type: " + std::string(s));
}

int VaccineStrategy::encode() const {
    int code = 0;
    int base = 1;
    for (int g = 0; g < kNumAgeGroups; ++g) {
        code += static_cast<int>(assignment[g]) * base;
        base *= 3;
    }
    return code;
}

VaccineStrategy VaccineStrategy::decode(int code) {
    if (code < 0 || code >= 243) {
        throw std::invalid_argument("VaccineStrategy::decode: code out of range");
    }
    VaccineStrategy s;
    for (int g = 0; g < kNumAgeGroups; ++g) {
        s.assignment[g] = static_cast<VaccineType>(code % 3);
        code /= 3;
    }
    return s;
}

bool VaccineStrategy::uses_both_types() const {
    bool has_mrna = false;
    bool has_vector = false;
    for (VaccineType t : assignment) {
        has_mrna |= t == VaccineType::Mrna;
        has_vector |= t == VaccineType::VectorBased;
    }
    return has_mrna && has_vector;
}

std::string VaccineStrategy::label() const {
    static constexpr char kLetters[] = {'N', 'M', 'V'};
    std::string out(kNumAgeGroups, 'N');
    for (int g = 0; g < kNumAgeGroups; ++g) {
        out[static_cast<std::size_t>(g)] = kLetters[static_cast<int>(assignment[g])];
    }
    return out;
}

std::vector<VaccineStrategy> enumerate_strategies() {
    std::vector<VaccineStrategy> out;
    for (int code = 0; code < 243; ++code) {
        VaccineStrategy s = VaccineStrategy::decode(code);
        if (s.uses_both_types()) {
            out.push_back(s);
        }
    }
    return out;
}

Objective parse_objective(std::string_view s) {
    if (s == "ari" || s == "ARI") {
        return Objective::InfectionAttackRate;
    }
    if (s == "arh" || s == "ARH") {
        return Objective::HospitalizationAttackRate;
    }
    throw ConfigError("unknown objective: " + std::string(s) + " (expected ari or arh)");
}

std::string_view objective_name(Objective o) {
    return o == Objective::InfectionAttackRate ? "ari" : "arh";
}

void EpidemicConfig::validate() const {
    if (population < 10) {
        throw ConfigError("epidemic config: population too small");
    }
    double fraction_sum = 0.0;
    for (double f : group_fractions) {
        if (!(f >= 0.0)) {
            throw ConfigError("epidemic config: group fractions must be >= 0");
        }
        fraction_sum += f;
    }
    if (std::fabs(fraction_sum - 1.0) > 1e-6) {
        throw ConfigError("epidemic config: group fractions must sum to 1");
    }
    for (int c = 0; c < kNumContexts; ++c) {
        if (!(contact_reductions[c] >= 0.0 && contact_reductions[c] <= 1.0)) {
            throw ConfigError("epidemic config: contact reductions must lie in [0, 1]");
        }
        for (int i = 0; i < kNumAgeGroups; ++i) {
            for (int j = 0; j < kNumAgeGroups; ++j) {
                if (!(contacts[c][i][j] >= 0.0)) {
                    throw ConfigError("epidemic config: contact rates must be >= 0");
                }
            }
        }
        // Reciprocity of total contact counts: f_i M_ij == f_j M_ji.
        for (int i = 0; i < kNumAgeGroups; ++i) {
            for (int j = i + 1; j < kNumAgeGroups; ++j) {
                const double lhs = group_fractions[i] * contacts[c][i][j];
                const double rhs = group_fractions[j] * contacts[c][j][i];
                if (std::fabs(lhs - rhs) > 1e-9 + 1e-6 * std::max(std::fabs(lhs), std::fabs(rhs))) {
                    throw ConfigError(std::string("epidemic config: contact matrix '") +
                                      std::string(kContextNames[c]) + "' is not reciprocal");
                }
            }
        }
    }
    if (!(transmission_probability > 0.0 && transmission_probability < 1.0)) {
        throw ConfigError("epidemic config: transmission probability must lie in (0, 1)");
    }
    if (!(latent_days >= 1.0) || !(infectious_days >= 1.0)) {
        throw ConfigError("epidemic config: latent/infectious durations must be >= 1 day");
    }
    for (int g = 0; g < kNumAgeGroups; ++g) {
        if (!(hospitalization_prob[g] >= 0.0 && hospitalization_prob[g] <= 1.0)) {
            throw ConfigError("epidemic config: hospitalization probabilities must lie in [0, 1]");
        }
        if (g > 0 && hospitalization_prob[g] < hospitalization_prob[g - 1]) {
            throw ConfigError("epidemic config: hospitalization probabilities must not decrease with age");
        }
    }
    if (!(initial_recovered_fraction >= 0.0 && initial_recovered_fraction < 1.0)) {
        throw ConfigError("epidemic config: initial recovered fraction must lie in [0, 1)");
    }
    if (!(initial_infected_fraction >= 0.0 && initial_infected_fraction < 1.0)) {
        throw ConfigError("epidemic config: initial infected fraction must lie in [0, 1)");
    }
    if (initial_recovered_fraction + initial_infected_fraction >= 1.0) {
        throw ConfigError("epidemic config: initial recovered + infected must be < 1");
    }
    for (const auto& schedule : {weekly_mrna_per_capita, weekly_vector_per_capita}) {
        for (double w : schedule) {
            if (!(w >= 0.0 && w <= 1.0)) {
                throw ConfigError("epidemic config: weekly supply fractions must lie in [0, 1]");
            }
        }
    }
    auto check_profile = [](const VaccineProfile& p, const char* name) {
        if (!(p.ve_susceptibility >= 0.0 && p.ve_susceptibility <= 1.0) ||
            !(p.ve_infectiousness >= 0.0 && p.ve_infectiousness <= 1.0) ||
            !(p.ve_disease >= 0.0 && p.ve_disease <= 1.0)) {
            throw ConfigError(std::string("epidemic config: ") + name + " efficacies must lie in [0, 1]");
        }
        if (p.activation_days <= 0) {
            throw ConfigError(std::string("epidemic config: ") + name + " activation_days must be > 0");
        }
    };
    check_profile(mrna, "mrna");
    check_profile(vector_based, "vector");
    if (horizon_days < 1) {
        throw ConfigError("epidemic config: horizon must be >= 1 day");
    }
}

std::array<long long, kNumAgeGroups> EpidemicConfig::group_sizes() const {
    return apportion(population, group_fractions);
}

ContactMatrix EpidemicConfig::effective_contacts() const {
    ContactMatrix eff{};
    for (int c = 0; c < kNumContexts; ++c) {
        const double keep = 1.0 - contact_reductions[c];
        for (int i = 0; i < kNumAgeGroups; ++i) {
            for (int j = 0; j < kNumAgeGroups; ++j) {
                eff[i][j] += keep * contacts[c][i][j];
            }
        }
    }
    return eff;
}

namespace {

// One vaccinated susceptible/progressed cohort: everyone in it received the
// same vaccine type on the same day, so the activation ramp is shared.
struct Cohort {
    int type = 0;  // 0 = mrna, 1 = vector
    int dose_day = 0;
    long long s = 0;
    long long e = 0;
    long long i = 0;
    long long r = 0;
};

struct GroupState {
    long long size = 0;
    // Never-vaccinated compartments.
    long long s_u = 0;
    long long e_u = 0;
    long long i_u = 0;
    long long r_u = 0;
    // Vaccinated after leaving S: doses are counted but have no modelled
    // effect; dynamics match the unvaccinated compartments.
    long long e_iv = 0;
    long long i_iv = 0;
    long long r_iv = 0;
    std::vector<Cohort> cohorts;  // ordered by (dose_day, type)
    std::array<long long, 2> cum_doses{};  // by type
    long long cum_hosp = 0;

    long long unvaccinated_pool() const { return s_u + e_u + i_u + r_u; }

    long long total_s() const {
        long long v = s_u;
        for (const Cohort& c : cohorts) {
            v += c.s;
        }
        return v;
    }
    long long total_e() const {
        long long v = e_u + e_iv;
        for (const Cohort& c : cohorts) {
            v += c.e;
        }
        return v;
    }
    long long total_i() const {
        long long v = i_u + i_iv;
        for (const Cohort& c : cohorts) {
            v += c.i;
        }
        return v;
    }
    long long total_r() const {
        long long v = r_u + r_iv;
        for (const Cohort& c : cohorts) {
            v += c.r;
        }
        return v;
    }
};

// Doses available on day `day` (1-based) given a weekly schedule: the weekly
// quantity is split over the seven days so that every week's total is exact.
long long doses_for_day(const std::vector<double>& weekly_per_capita, int population, int day) {
    const int week = (day - 1) / 7;
    const int day_in_week = (day - 1) % 7;
    if (week < 0 || week >= static_cast<int>(weekly_per_capita.size())) {
        return 0;
    }
    const long long weekly = std::llround(weekly_per_capita[static_cast<std::size_t>(week)] *
                                          static_cast<double>(population));
    return (day_in_week + 1) * weekly / 7 - day_in_week * weekly / 7;
}

// Plans how many doses of `type` go to each group: proportional to group
// sizes over the groups the strategy assigns this type to, capped by the
// unvaccinated pool; surplus spills to same-type groups first, then
// unassigned groups, then groups assigned the other type (ascending group
// index within each class).
std::array<long long, kNumAgeGroups> plan_allocation(
    long long doses, VaccineType type, const VaccineStrategy& strategy,
    const std::array<long long, kNumAgeGroups>& group_sizes,
    const std::array<long long, kNumAgeGroups>& pools) {
    std::array<long long, kNumAgeGroups> plan{};
    if (doses <= 0) {
        return plan;
    }
    std::vector<int> assigned;
    for (int g = 0; g < kNumAgeGroups; ++g) {
        if (strategy.assignment[g] == type) {
            assigned.push_back(g);
        }
    }
    long long leftover = doses;
    if (!assigned.empty()) {
        std::array<double, kNumAgeGroups> weights{};
        for (int g : assigned) {
            weights[g] = static_cast<double>(group_sizes[g]);
        }
        const auto shares = apportion(doses, weights);
        for (int g : assigned) {
            plan[g] = std::min(shares[g], pools[g]);
            leftover -= plan[g];
        }
    }
    // Spill priority: same-type assignments, then no-vaccine groups, then
    // other-type groups.
    std::vector<int> priority = assigned;
    for (int g = 0; g < kNumAgeGroups; ++g) {
        if (strategy.assignment[g] == VaccineType::None) {
            priority.push_back(g);
        }
    }
    for (int g = 0; g < kNumAgeGroups; ++g) {
        if (strategy.assignment[g] != type && strategy.assignment[g] != VaccineType::None) {
            priority.push_back(g);
        }
    }
    for (int g : priority) {
        if (leftover <= 0) {
            break;
        }
        const long long extra = std::min(leftover, pools[g] - plan[g]);
        plan[g] += extra;
        leftover -= extra;
    }
    return plan;
}

}  // namespace

SimOutcome simulate_epidemic(const EpidemicConfig& config, const VaccineStrategy& strategy,
                             std::uint64_t seed) {
    config.validate();
    Rng rng(seed);

    const auto group_sizes = config.group_sizes();
    const long long population = std::accumulate(group_sizes.begin(), group_sizes.end(), 0LL);

    std::array<GroupState, kNumAgeGroups> groups{};
    long long cum_infections = 0;

    // Initial state: recovered fraction per group, infectious seeds spread
    // proportionally to group size, remainder susceptible. Initial infections
    // count toward the attack rate and roll for hospitalization (day 0).
    {
        std::array<double, kNumAgeGroups> size_weights{};
        for (int g = 0; g < kNumAgeGroups; ++g) {
            size_weights[g] = static_cast<double>(group_sizes[g]);
        }
        const long long seeds = std::llround(config.initial_infected_fraction *
                                             static_cast<double>(population));
        const auto initial_infected = apportion(seeds, size_weights);
        for (int g = 0; g < kNumAgeGroups; ++g) {
            GroupState& gs = groups[g];
            gs.size = group_sizes[g];
            gs.r_u = std::llround(config.initial_recovered_fraction *
                                  static_cast<double>(gs.size));
            gs.i_u = std::min(initial_infected[g], gs.size - gs.r_u);
            gs.s_u = gs.size - gs.r_u - gs.i_u;
            cum_infections += gs.i_u;
        }
        for (int g = 0; g < kNumAgeGroups; ++g) {
            groups[g].cum_hosp = rng.binomial(groups[g].i_u, config.hospitalization_prob[g]);
        }
    }

    SimOutcome outcome;
    const ContactMatrix effective = config.effective_contacts();
    const double p_incubate = 1.0 / config.latent_days;
    const double p_recover = 1.0 / config.infectious_days;
    const std::array<const VaccineProfile*, 2> profiles = {&config.mrna, &config.vector_based};

    auto record_day = [&](int day) {
        DayRecord rec;
        rec.day = day;
        for (int g = 0; g < kNumAgeGroups; ++g) {
            const GroupState& gs = groups[g];
            GroupDay& gd = rec.groups[g];
            gd.susceptible = gs.total_s();
            gd.exposed = gs.total_e();
            gd.infectious = gs.total_i();
            gd.recovered = gs.total_r();
            gd.vaccinated_mrna = gs.cum_doses[0];
            gd.vaccinated_vector = gs.cum_doses[1];
            gd.hospitalized_cum = gs.cum_hosp;
        }
        outcome.daily.push_back(rec);
    };
    record_day(0);

    for (int day = 1; day <= config.horizon_days; ++day) {
        // --- vaccination -----------------------------------------------
        // Types are processed in a fixed order (mRNA then vector); each
        // plan sees the pools left by the previous one. Doses are handed to
        // uniformly random unvaccinated individuals: susceptible recipients
        // form a new cohort, recipients already exposed/infectious/recovered
        // are recorded but gain nothing.
        for (int type = 0; type < 2; ++type) {
            const auto& schedule =
                type == 0 ? config.weekly_mrna_per_capita : config.weekly_vector_per_capita;
            const long long doses = doses_for_day(schedule, config.population, day);
            if (doses <= 0) {
                continue;
            }
            std::array<long long, kNumAgeGroups> pools{};
            for (int g = 0; g < kNumAgeGroups; ++g) {
                pools[g] = groups[g].unvaccinated_pool();
            }
            const auto plan = plan_allocation(doses, static_cast<VaccineType>(type + 1),
                                              strategy, group_sizes, pools);
            long long administered = 0;
            for (int g = 0; g < kNumAgeGroups; ++g) {
                if (plan[g] <= 0) {
                    continue;
                }
                GroupState& gs = groups[g];
                Cohort* cohort = nullptr;
                for (long long dose = 0; dose < plan[g]; ++dose) {
                    const long long pool = gs.unvaccinated_pool();
                    if (pool <= 0) {
                        break;
                    }
                    const long long pick = static_cast<long long>(
                        rng.uniform_int(static_cast<std::uint64_t>(pool)));
                    if (pick < gs.s_u) {
                        if (cohort == nullptr) {
                            gs.cohorts.push_back(Cohort{type, day, 0, 0, 0, 0});
                            cohort = &gs.cohorts.back();
                        }
                        --gs.s_u;
                        ++cohort->s;
                    } else if (pick < gs.s_u + gs.e_u) {
                        --gs.e_u;
                        ++gs.e_iv;
                    } else if (pick < gs.s_u + gs.e_u + gs.i_u) {
                        --gs.i_u;
                        ++gs.i_iv;
                    } else {
                        --gs.r_u;
                        ++gs.r_iv;
                    }
                    ++gs.cum_doses[type];
                    ++administered;
                }
            }
            outcome.discarded_doses += doses - administered;
        }

        // --- transmission and progression ------------------------------
        // Infectiousness-weighted infectious counts from the start-of-day
        // state (vaccinated infectious individuals are discounted by their
        // activation-scaled VE_I).
        std::array<double, kNumAgeGroups> weighted_infectious{};
        for (int g = 0; g < kNumAgeGroups; ++g) {
            const GroupState& gs = groups[g];
            double w = static_cast<double>(gs.i_u + gs.i_iv);
            for (const Cohort& c : gs.cohorts) {
                if (c.i > 0) {
                    const VaccineProfile& profile = *profiles[c.type];
                    const double act = profile.activation(day - c.dose_day);
                    w += static_cast<double>(c.i) * (1.0 - act * profile.ve_infectiousness);
                }
            }
            weighted_infectious[g] = w;
        }
        std::array<double, kNumAgeGroups> hazard{};
        for (int i = 0; i < kNumAgeGroups; ++i) {
            double acc = 0.0;
            for (int j = 0; j < kNumAgeGroups; ++j) {
                if (group_sizes[j] > 0) {
                    acc += effective[i][j] * weighted_infectious[j] /
                           static_cast<double>(group_sizes[j]);
                }
            }
            hazard[i] = config.transmission_probability * acc;
        }

        for (int g = 0; g < kNumAgeGroups; ++g) {
            GroupState& gs = groups[g];
            const double p_infect = 1.0 - std::exp(-hazard[g]);
            const double h_g = config.hospitalization_prob[g];

            // Never vaccinated: recovery, incubation, infection,
            // hospitalization (in that draw order).
            {
                const long long recovering = rng.binomial(gs.i_u, p_recover);
                const long long incubating = rng.binomial(gs.e_u, p_incubate);
                const long long infected = rng.binomial(gs.s_u, p_infect);
                const long long hospitalized = rng.binomial(infected, h_g);
                gs.i_u += incubating - recovering;
                gs.r_u += recovering;
                gs.e_u += infected - incubating;
                gs.s_u -= infected;
                cum_infections += infected;
                gs.cum_hosp += hospitalized;
            }
            // Vaccinated after leaving S: same dynamics, no susceptibles.
            {
                const long long recovering = rng.binomial(gs.i_iv, p_recover);
                const long long incubating = rng.binomial(gs.e_iv, p_incubate);
                gs.i_iv += incubating - recovering;
                gs.r_iv += recovering;
                gs.e_iv -= incubating;
            }
            for (Cohort& c : gs.cohorts) {
                const VaccineProfile& profile = *profiles[c.type];
                const double act = profile.activation(day - c.dose_day);
                const double p_infect_vacc =
                    1.0 - std::exp(-hazard[g] * (1.0 - act * profile.ve_susceptibility));
                const long long recovering = rng.binomial(c.i, p_recover);
                const long long incubating = rng.binomial(c.e, p_incubate);
                const long long infected = rng.binomial(c.s, p_infect_vacc);
                const long long hospitalized =
                    rng.binomial(infected, h_g * (1.0 - act * profile.ve_disease));
                c.i += incubating - recovering;
                c.r += recovering;
                c.e += infected - incubating;
                c.s -= infected;
                cum_infections += infected;
                gs.cum_hosp += hospitalized;
            }
        }

        record_day(day);
    }

    long long cum_hosp = 0;
    for (const GroupState& gs : groups) {
        cum_hosp += gs.cum_hosp;
    }
    outcome.cumulative_infections = cum_infections;
    outcome.cumulative_hospitalizations = cum_hosp;
    outcome.attack_rate_infections =
        static_cast<double>(cum_infections) / static_cast<double>(population);
    outcome.attack_rate_hospitalizations =
        static_cast<double>(cum_hosp) / static_cast<double>(population);
    return outcome;
}

void SimOutcome::write_csv(std::ostream& os) const {
    os << "day,group,S,E,I,R,vaccinated_mrna,vaccinated_vector,hospitalized_cum\n";
    for (const DayRecord& rec : daily) {
        for (int g = 0; g < kNumAgeGroups; ++g) {
            const GroupDay& gd = rec.groups[g];
            os << rec.day << ',' << kAgeGroupNames[g] << ',' << gd.susceptible << ','
               << gd.exposed << ',' << gd.infectious << ',' << gd.recovered << ','
               << gd.vaccinated_mrna << ',' << gd.vaccinated_vector << ','
               << gd.hospitalized_cum << '\n';
        }
    }
}

double epidemic_reward(const SimOutcome& outcome, Objective objective) {
    const double rate = objective == Objective::InfectionAttackRate
                            ? outcome.attack_rate_infections
                            : outcome.attack_rate_hospitalizations;
    return 1.0 - rate;
}

std::array<double, kNumContexts> scenario_reductions(std::string_view name) {
    if (name == "Baseline") {
        return {0.0, 0.5, 1.0, 0.7, 0.7};
    }
    if (name == "Relaxed") {
        return {0.0, 0.5, 1.0, 0.5, 0.5};
    }
    if (name == "TertiaryEducation") {
        return {0.0, 0.5, 0.7, 0.7, 0.7};
    }
    if (name == "SecondarySchools") {
        return {0.0, 0.0, 1.0, 0.7, 0.7};
    }
    if (name == "RelaxedCommunity") {
        return {0.0, 0.5, 1.0, 0.7, 0.5};
    }
    if (name == "RelaxedWorkplace") {
        return {0.0, 0.5, 1.0, 0.5, 0.7};
    }
    throw ConfigError("unknown scenario: " + std::string(name));
}

EpidemicConfig apply_scenario(EpidemicConfig base, std::string_view name) {
    base.contact_reductions = scenario_reductions(name);
    return base;
}

EpidemicBandit::EpidemicBandit(EpidemicConfig config, std::vector<VaccineStrategy> arms,
                               Objective objective, int m)
    : config_(std::move(config)), arms_(std::move(arms)), objective_(objective) {
    config_.validate();
    if (arms_.size() < 2) {
        throw ConfigError("epidemic bandit: need at least two arms");
    }
    if (m < 1 || m >= static_cast<int>(arms_.size())) {
        throw ConfigError("epidemic bandit: need 1 <= m < K");
    }
    descriptor_.num_arms = static_cast<int>(arms_.size());
    descriptor_.top_size = m;
}

Reward EpidemicBandit::pull(int arm, Rng& rng) {
    require_valid_arm(arm);
    const std::uint64_t sim_seed = rng.next_u64();
    const SimOutcome outcome =
        simulate_epidemic(config_, arms_[static_cast<std::size_t>(arm)], sim_seed);
    return epidemic_reward(outcome, objective_);
}

const VaccineStrategy& EpidemicBandit::strategy(int arm) const {
    if (arm < 0 || arm >= static_cast<int>(arms_.size())) {
        throw InvalidArmError("EpidemicBandit::strategy: arm out of range");
    }
    return arms_[static_cast<std::size_t>(arm)];
}

}  // namespace mtop
