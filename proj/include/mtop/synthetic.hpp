#pragma once

#include <optional>
#include <vector>

#include "mtop/bandit.hpp"

namespace mtop {

// Gaussian arm, optionally a two-component mixture (stochastic epidemic
// outcome distributions are bimodal: fade-out vs established outbreak).
// Draws are clamped to [0, 1] at the environment boundary.
struct SyntheticArmSpec {
    double mean = 0.5;
    double sd = 0.0;
    // Second mode; mixture_weight is the probability of drawing from it.
    double mean2 = 0.0;
    double sd2 = 0.0;
    double mixture_weight = 0.0;

    // Expected value of the clamped draw (closed form via the normal CDF);
    // differs from `mean` when sd is large relative to the boundary distance.
    double clamped_mean() const;
    double clamp_bias() const { return clamped_mean() - unclamped_mean(); }
    double unclamped_mean() const {
        return (1.0 - mixture_weight) * mean + mixture_weight * mean2;
    }

    void validate() const;
};

class SyntheticBandit : public Environment {
  public:
    SyntheticBandit(std::vector<SyntheticArmSpec> arms, int m);

    const EnvironmentDescriptor& descriptor() const override { return descriptor_; }
    Reward pull(int arm, Rng& rng) override;
    long long clamp_count() const override { return clamp_count_; }

    const SyntheticArmSpec& arm_spec(int arm) const { return arms_.at(static_cast<std::size_t>(arm)); }

  private:
    std::vector<SyntheticArmSpec> arms_;
    EnvironmentDescriptor descriptor_;
    long long clamp_count_ = 0;
};

// K arms with means evenly spaced over [lo, hi] (arm 0 lowest) and a shared
// standard deviation.
std::vector<SyntheticArmSpec> linspace_arms(int num_arms, double lo, double hi, double sd);

}  // namespace mtop
