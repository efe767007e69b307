#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mtop/rng.hpp"

namespace mtop {

// Arms are dense indices in [0, K). Rewards are reals in [0, 1]; environments
// clamp (and count clamps) at the boundary.
using Reward = double;

struct Recommendation {
    std::vector<int> arms;  // sorted ascending, exactly m distinct entries
    long long timestep = 0;

    bool contains(int arm) const;
    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

// Ordered pull record plus per-arm counts.
class History {
  public:
    explicit History(int num_arms);

    void append(int arm, Reward reward);
    static History from_entries(int num_arms, std::span<const std::pair<int, Reward>> entries);

    long long size() const { return static_cast<long long>(entries_.size()); }
    long long pull_count(int arm) const;
    const std::vector<std::pair<int, Reward>>& entries() const { return entries_; }
    std::vector<Reward> rewards_for(int arm) const;
    int num_arms() const { return static_cast<int>(counts_.size()); }

    friend bool operator==(const History&, const History&) = default;

  private:
    std::vector<std::pair<int, Reward>> entries_;
    std::vector<long long> counts_;
};

struct EnvironmentDescriptor {
    int num_arms = 0;
    int top_size = 0;  // m
    // Present only for oracle-backed environments (synthetic bandits).
    std::optional<std::vector<double>> true_means;
};

// Reward-generating process. One pull returns one independent draw from the
// arm's reward distribution; determinism is inherited from the Rng stream.
class Environment {
  public:
    virtual ~Environment() = default;

    virtual const EnvironmentDescriptor& descriptor() const = 0;
    int num_arms() const { return descriptor().num_arms; }

    // Throws InvalidArmError for an out-of-range index.
    virtual Reward pull(int arm, Rng& rng) = 0;

    // Number of rewards clamped into [0, 1] so far.
    virtual long long clamp_count() const { return 0; }

  protected:
    void require_valid_arm(int arm) const;
};

// One explorer step: the arms pulled (1 for BFTS/uniform, 2 for AT-LUCB),
// the rewards observed, and the recommendation standing after the step.
struct StepResult {
    long long t = 0;
    std::vector<int> pulled;
    std::vector<Reward> rewards;
    Recommendation recommendation;
    int stage = 0;                      // AT-LUCB stage index; 0 otherwise
    std::vector<double> sampled_means;  // BFTS posterior draws; empty otherwise
};

// Common contract for the exploration strategies. A state is single-owner and
// mutated sequentially; independent runs are embarrassingly parallel.
class Explorer {
  public:
    virtual ~Explorer() = default;

    virtual std::string_view name() const = 0;
    virtual int pulls_per_step() const = 0;
    virtual StepResult step(Environment& env, Rng& rng) = 0;
    virtual Recommendation recommend() const = 0;
    virtual long long pull_count(int arm) const = 0;
};

// Indices of the m largest scores, ties broken toward the lower index.
// Returned sorted ascending.
std::vector<int> top_m_by_score(std::span<const double> scores, int m);

}  // namespace mtop
