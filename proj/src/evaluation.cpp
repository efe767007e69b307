#include "mtop/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "mtop/errors.hpp"

namespace mtop {

GroundTruth GroundTruth::build(Environment& env, int repetitions, std::uint64_t seed,
                               std::string env_hash) {
    if (repetitions < 2) {
        throw ConfigError("ground truth: need at least 2 repetitions per arm");
    }
    const int num_arms = env.num_arms();
    GroundTruth gt;
    gt.env_hash = std::move(env_hash);
    gt.repetitions = repetitions;
    gt.m = env.descriptor().top_size;
    gt.samples.resize(static_cast<std::size_t>(num_arms));
    gt.means.resize(static_cast<std::size_t>(num_arms));
    for (int arm = 0; arm < num_arms; ++arm) {
        auto& row = gt.samples[static_cast<std::size_t>(arm)];
        row.reserve(static_cast<std::size_t>(repetitions));
        double sum = 0.0;
        for (int rep = 0; rep < repetitions; ++rep) {
            Rng rng(derive_seed(seed, {seed_tag::kGroundTruth,
                                       static_cast<std::uint64_t>(arm),
                                       static_cast<std::uint64_t>(rep)}));
            const double value = env.pull(arm, rng);
            row.push_back(value);
            sum += value;
        }
        gt.means[static_cast<std::size_t>(arm)] = sum / repetitions;
    }
    gt.j_true = top_m_by_score(gt.means, gt.m);
    return gt;
}

GroundTruth GroundTruth::from_true_means(const EnvironmentDescriptor& descriptor,
                                         std::string env_hash) {
    if (!descriptor.true_means.has_value()) {
        throw ConfigError("ground truth: environment does not expose true means");
    }
    GroundTruth gt;
    gt.env_hash = std::move(env_hash);
    gt.repetitions = 0;
    gt.m = descriptor.top_size;
    gt.means = *descriptor.true_means;
    gt.samples.assign(gt.means.size(), {});
    gt.j_true = top_m_by_score(gt.means, gt.m);
    return gt;
}

nlohmann::json GroundTruth::to_json() const {
    nlohmann::json j;
    j["env_hash"] = env_hash;
    j["R"] = repetitions;
    j["samples"] = samples;
    j["means"] = means;
    j["j_true"] = j_true;
    j["m"] = m;
    return j;
}

GroundTruth GroundTruth::from_json(const nlohmann::json& j) {
    GroundTruth gt;
    gt.env_hash = j.at("env_hash").get<std::string>();
    gt.repetitions = j.at("R").get<int>();
    gt.samples = j.at("samples").get<std::vector<std::vector<double>>>();
    gt.means = j.at("means").get<std::vector<double>>();
    gt.j_true = j.at("j_true").get<std::vector<int>>();
    gt.m = j.at("m").get<int>();
    return gt;
}

double sum_of_means(const Recommendation& rec, const GroundTruth& gt) {
    double total = 0.0;
    for (int arm : rec.arms) {
        if (arm < 0 || arm >= static_cast<int>(gt.means.size())) {
            throw InvalidArmError("sum_of_means: arm " + std::to_string(arm) +
                                  " missing from ground truth");
        }
        total += gt.means[static_cast<std::size_t>(arm)];
    }
    return total;
}

double proportion_correct(const Recommendation& rec, const GroundTruth& gt) {
    for (int arm : rec.arms) {
        if (arm < 0 || arm >= static_cast<int>(gt.means.size())) {
            throw InvalidArmError("proportion_correct: arm " + std::to_string(arm) +
                                  " missing from ground truth");
        }
    }
    std::vector<int> overlap;
    std::set_intersection(rec.arms.begin(), rec.arms.end(), gt.j_true.begin(), gt.j_true.end(),
                          std::back_inserter(overlap));
    return static_cast<double>(overlap.size()) / static_cast<double>(gt.m);
}

nlohmann::json StepLog::to_json(std::string_view algorithm) const {
    nlohmann::json j;
    j["t"] = t;
    j["samples_used"] = samples_used;
    j["algorithm"] = std::string(algorithm);
    j["pulled_arms"] = pulled;
    j["recommendation"] = recommendation;
    if (stage > 0) {
        j["stage"] = stage;
    }
    if (!sampled_means.empty()) {
        j["sampled_means"] = sampled_means;
    }
    if (!posteriors.empty()) {
        nlohmann::json snaps = nlohmann::json::array();
        for (const PosteriorSnapshot& p : posteriors) {
            nlohmann::json s;
            s["arm"] = p.arm;
            s["n"] = p.n;
            s["mu0"] = p.mu0;
            s["sigma0_sq"] = p.sigma0_sq;
            s["nu"] = p.nu;
            s["truncated_mean"] = p.truncated_mean;
            snaps.push_back(s);
        }
        j["posteriors"] = snaps;
    }
    return j;
}

nlohmann::json ExperimentRecord::trace_to_json() const {
    nlohmann::json lines = nlohmann::json::array();
    for (const TraceEntry& entry : trace) {
        nlohmann::json j;
        j["sample"] = entry.sample;
        j["recommendation"] = entry.recommendation;
        if (entry.sum_means.has_value()) {
            j["sum_of_means"] = *entry.sum_means;
        }
        if (entry.prop_correct.has_value()) {
            j["proportion_correct"] = *entry.prop_correct;
        }
        lines.push_back(j);
    }
    return lines;
}

std::unique_ptr<Explorer> make_explorer(std::string_view algorithm, int num_arms, int m,
                                        const AtLucbParams& atlucb) {
    if (algorithm == "bfts") {
        return std::make_unique<Bfts>(num_arms, m);
    }
    if (algorithm == "atlucb") {
        return std::make_unique<AtLucb>(num_arms, m, atlucb);
    }
    if (algorithm == "uniform") {
        return std::make_unique<UniformSampler>(num_arms, m);
    }
    throw ConfigError("unknown algorithm: " + std::string(algorithm) +
                      " (expected bfts, atlucb or uniform)");
}

ExperimentRecord run_single(Environment& env, const RunConfig& config, std::uint64_t run_seed,
                            const GroundTruth* gt) {
    std::unique_ptr<Explorer> explorer =
        make_explorer(config.algorithm, env.num_arms(), env.descriptor().top_size, config.atlucb);
    if (config.algorithm == "bfts" && config.budget < 2LL * env.num_arms()) {
        throw ConfigError("budget " + std::to_string(config.budget) +
                          " is smaller than the BFTS warm-up of " +
                          std::to_string(2 * env.num_arms()) + " samples");
    }
    if (config.budget < explorer->pulls_per_step()) {
        throw ConfigError("budget too small for a single step");
    }

    ExperimentRecord record;
    record.config_hash = config.config_hash;
    record.algorithm = config.algorithm;
    record.run_seed = run_seed;
    record.budget = config.budget;

    Rng rng(run_seed);
    Bfts* bfts = dynamic_cast<Bfts*>(explorer.get());
    Recommendation previous = explorer->recommend();
    long long samples_used = 0;

    while (samples_used + explorer->pulls_per_step() <= config.budget) {
        StepResult result = explorer->step(env, rng);
        const std::size_t pulls = result.pulled.size();
        for (std::size_t i = 0; i < pulls; ++i) {
            ++samples_used;
            const Recommendation& rec = (i + 1 == pulls) ? result.recommendation : previous;
            TraceEntry entry;
            entry.sample = samples_used;
            entry.recommendation = rec.arms;
            if (gt != nullptr) {
                entry.sum_means = sum_of_means(rec, *gt);
                entry.prop_correct = proportion_correct(rec, *gt);
            }
            record.trace.push_back(std::move(entry));
        }

        StepLog log;
        log.t = result.t;
        log.samples_used = samples_used;
        log.pulled = result.pulled;
        log.recommendation = result.recommendation.arms;
        log.stage = result.stage;
        if (config.keep_sampled_means) {
            log.sampled_means = std::move(result.sampled_means);
        }
        if (bfts != nullptr && config.snapshot_every > 0 &&
            result.t % config.snapshot_every == 0 && !bfts->in_warmup()) {
            for (int arm = 0; arm < env.num_arms(); ++arm) {
                const TruncatedTPosterior& p = bfts->posterior(arm);
                PosteriorSnapshot snap;
                snap.arm = arm;
                snap.n = p.count();
                snap.mu0 = p.location();
                snap.sigma0_sq = p.scale_sq();
                snap.nu = p.dof();
                snap.truncated_mean = p.truncated_mean();
                log.posteriors.push_back(snap);
            }
        }
        record.steps.push_back(std::move(log));
        previous = result.recommendation;
    }

    record.samples_used = samples_used;
    record.leftover = config.budget - samples_used;
    record.clamped_rewards = env.clamp_count();
    return record;
}

std::vector<ExperimentRecord> run_experiment(const EnvironmentFactory& factory,
                                             const RunConfig& config, const GroundTruth* gt) {
    if (config.n_runs < 1) {
        throw ConfigError("run_experiment: need at least one run");
    }
    std::vector<ExperimentRecord> records(static_cast<std::size_t>(config.n_runs));
    const int workers = std::max(1, std::min(config.parallel, config.n_runs));

    std::exception_ptr first_error = nullptr;
    std::mutex error_mutex;
    auto work = [&](int worker_index) {
        for (int run = worker_index; run < config.n_runs; run += workers) {
            try {
                const std::uint64_t run_seed = derive_seed(
                    config.base_seed, {seed_tag::kRun, static_cast<std::uint64_t>(run)});
                std::unique_ptr<Environment> env = factory();
                records[static_cast<std::size_t>(run)] = run_single(*env, config, run_seed, gt);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error == nullptr) {
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            threads.emplace_back(work, w);
        }
        for (std::thread& thread : threads) {
            thread.join();
        }
    }
    if (first_error != nullptr) {
        std::rethrow_exception(first_error);
    }
    return records;
}

std::vector<AggregateRow> aggregate_curves(const std::vector<ExperimentRecord>& records) {
    if (records.empty() || records.front().trace.empty() ||
        !records.front().trace.front().prop_correct.has_value()) {
        return {};
    }
    std::size_t length = records.front().trace.size();
    for (const ExperimentRecord& record : records) {
        length = std::min(length, record.trace.size());
    }
    std::vector<AggregateRow> rows(length);
    const double n = static_cast<double>(records.size());
    for (std::size_t i = 0; i < length; ++i) {
        double sum_pc = 0.0;
        double sum_pc_sq = 0.0;
        double sum_sm = 0.0;
        double sum_sm_sq = 0.0;
        for (const ExperimentRecord& record : records) {
            const TraceEntry& entry = record.trace[i];
            const double pc = entry.prop_correct.value();
            const double sm = entry.sum_means.value();
            sum_pc += pc;
            sum_pc_sq += pc * pc;
            sum_sm += sm;
            sum_sm_sq += sm * sm;
        }
        AggregateRow& row = rows[i];
        row.sample = records.front().trace[i].sample;
        row.mean_prop_correct = sum_pc / n;
        row.mean_sum_means = sum_sm / n;
        if (records.size() > 1) {
            row.sd_prop_correct = std::sqrt(std::max(
                0.0, (sum_pc_sq - n * row.mean_prop_correct * row.mean_prop_correct) / (n - 1.0)));
            row.sd_sum_means = std::sqrt(std::max(
                0.0, (sum_sm_sq - n * row.mean_sum_means * row.mean_sum_means) / (n - 1.0)));
        }
    }
    return rows;
}

void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << "sample_index,mean_prop_correct,sd_prop_correct,mean_sum_means,sd_sum_means\n";
    char buffer[160];
    for (const AggregateRow& row : rows) {
        std::snprintf(buffer, sizeof(buffer), "%lld,%.17g,%.17g,%.17g,%.17g\n", row.sample,
                      row.mean_prop_correct, row.sd_prop_correct, row.mean_sum_means,
                      row.sd_sum_means);
        os << buffer;
    }
}

}  // namespace mtop
