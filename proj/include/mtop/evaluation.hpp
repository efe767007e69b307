#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtop/algorithms.hpp"
#include "mtop/bandit.hpp"

namespace mtop {

// Exhaustive per-arm sampling used to define the true top-m set.
struct GroundTruth {
    std::string env_hash;
    int repetitions = 0;                       // R; 0 when built from known means
    std::vector<std::vector<double>> samples;  // [K][R]
    std::vector<double> means;                 // [K]
    std::vector<int> j_true;                   // sorted ascending, size m
    int m = 0;

    // Pulls every arm exactly `repetitions` times with independent sub-seeds.
    static GroundTruth build(Environment& env, int repetitions, std::uint64_t seed,
                             std::string env_hash = "");

    // Uses the environment's analytic means (synthetic bandits only); exact
    // where sampling could misorder close arms.
    static GroundTruth from_true_means(const EnvironmentDescriptor& descriptor,
                                       std::string env_hash = "");

    nlohmann::json to_json() const;
    static GroundTruth from_json(const nlohmann::json& j);
};

// Sum of ground-truth means over the recommended set.
double sum_of_means(const Recommendation& rec, const GroundTruth& gt);
// |J(t) intersect J_true| / m.
double proportion_correct(const Recommendation& rec, const GroundTruth& gt);

struct PosteriorSnapshot {
    int arm = 0;
    long long n = 0;
    double mu0 = 0.0;
    double sigma0_sq = 0.0;
    double nu = 0.0;
    double truncated_mean = 0.0;
};

// One log line per explorer step.
struct StepLog {
    long long t = 0;
    long long samples_used = 0;
    std::vector<int> pulled;
    std::vector<int> recommendation;
    int stage = 0;
    std::vector<double> sampled_means;           // BFTS, when retained
    std::vector<PosteriorSnapshot> posteriors;   // BFTS, at snapshot interval

    nlohmann::json to_json(std::string_view algorithm) const;
};

// One metric record per consumed sample. Between AT-LUCB's two intra-step
// pulls the previous recommendation is carried.
struct TraceEntry {
    long long sample = 0;
    std::vector<int> recommendation;
    std::optional<double> sum_means;
    std::optional<double> prop_correct;
};

struct ExperimentRecord {
    std::string config_hash;
    std::string algorithm;
    std::uint64_t run_seed = 0;
    long long budget = 0;
    long long samples_used = 0;
    long long leftover = 0;  // <= 1, only for two-pull algorithms
    long long clamped_rewards = 0;
    std::vector<StepLog> steps;
    std::vector<TraceEntry> trace;  // length == samples_used

    nlohmann::json trace_to_json() const;  // newline-delimited records
};

struct RunConfig {
    std::string algorithm;  // "bfts" | "atlucb" | "uniform"
    long long budget = 0;
    int n_runs = 1;
    std::uint64_t base_seed = 0;
    AtLucbParams atlucb;
    int parallel = 1;
    long long snapshot_every = 0;     // BFTS posterior snapshots every N steps
    bool keep_sampled_means = false;  // retain BFTS per-step sample vectors
    std::string config_hash;
};

using EnvironmentFactory = std::function<std::unique_ptr<Environment>()>;

std::unique_ptr<Explorer> make_explorer(std::string_view algorithm, int num_arms, int m,
                                        const AtLucbParams& atlucb = {});

// One budgeted run; the explorer steps until the next step would exceed the
// sample budget. Metrics are attached per sample when ground truth is given.
ExperimentRecord run_single(Environment& env, const RunConfig& config, std::uint64_t run_seed,
                            const GroundTruth* gt);

// n_runs independent runs with seeds derived from (base_seed, run index);
// executed on `parallel` workers, merged in run order (bit-identical to a
// serial execution).
std::vector<ExperimentRecord> run_experiment(const EnvironmentFactory& factory,
                                             const RunConfig& config, const GroundTruth* gt);

struct AggregateRow {
    long long sample = 0;
    double mean_prop_correct = 0.0;
    double sd_prop_correct = 0.0;
    double mean_sum_means = 0.0;
    double sd_sum_means = 0.0;
};

// Mean and standard deviation across runs, per sample index. Empty when the
// records carry no metrics.
std::vector<AggregateRow> aggregate_curves(const std::vector<ExperimentRecord>& records);

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace mtop
