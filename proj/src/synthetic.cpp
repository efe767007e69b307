#include "mtop/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "mtop/errors.hpp"
#include "mtop/student_t.hpp"

namespace mtop {

namespace {

double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * 0.39894228040143267794;
}

// E[clamp(X, 0, 1)] for X ~ N(mu, sd^2).
double clamped_normal_mean(double mu, double sd) {
    if (sd <= 0.0) {
        return clamp01(mu);
    }
    const double a = (0.0 - mu) / sd;
    const double b = (1.0 - mu) / sd;
    const double cdf_a = std_normal_cdf(a);
    const double cdf_b = std_normal_cdf(b);
    return mu * (cdf_b - cdf_a) - sd * (std_normal_pdf(b) - std_normal_pdf(a)) + (1.0 - cdf_b);
}

}  // namespace

double SyntheticArmSpec::clamped_mean() const {
    return (1.0 - mixture_weight) * clamped_normal_mean(mean, sd) +
           mixture_weight * clamped_normal_mean(mean2, sd2);
}

void SyntheticArmSpec::validate() const {
    if (!(mean >= 0.0 && mean <= 1.0)) {
        throw ConfigError("synthetic arm: mean must lie in [0, 1]");
    }
    if (!(sd >= 0.0)) {
        throw ConfigError("synthetic arm: sd must be >= 0");
    }
    if (!(mixture_weight >= 0.0 && mixture_weight <= 1.0)) {
        throw ConfigError("synthetic arm: mixture weight must lie in [0, 1]");
    }
    if (mixture_weight > 0.0) {
        if (!(mean2 >= 0.0 && mean2 <= 1.0)) {
            throw ConfigError("synthetic arm: second mode mean must lie in [0, 1]");
        }
        if (!(sd2 >= 0.0)) {
            throw ConfigError("synthetic arm: second mode sd must be >= 0");
        }
    }
}

SyntheticBandit::SyntheticBandit(std::vector<SyntheticArmSpec> arms, int m)
    : arms_(std::move(arms)) {
    if (arms_.size() < 2) {
        throw ConfigError("synthetic bandit: need at least two arms");
    }
    if (m < 1 || m >= static_cast<int>(arms_.size())) {
        throw ConfigError("synthetic bandit: need 1 <= m < K");
    }
    std::vector<double> true_means;
    true_means.reserve(arms_.size());
    for (const auto& spec : arms_) {
        spec.validate();
        true_means.push_back(spec.clamped_mean());
    }
    descriptor_.num_arms = static_cast<int>(arms_.size());
    descriptor_.top_size = m;
    descriptor_.true_means = std::move(true_means);
}

Reward SyntheticBandit::pull(int arm, Rng& rng) {
    require_valid_arm(arm);
    const SyntheticArmSpec& spec = arms_[static_cast<std::size_t>(arm)];
    // Every pull consumes the same amount of randomness (one mode pick plus
    // one normal draw), so arms with and without a second mode stay aligned
    // on a shared stream.
    const double mode_pick = rng.uniform01();
    const double z = rng.normal();
    double value;
    if (mode_pick < spec.mixture_weight) {
        value = spec.mean2 + spec.sd2 * z;
    } else {
        value = spec.mean + spec.sd * z;
    }
    const double clamped = clamp01(value);
    if (clamped != value) {
        ++clamp_count_;
    }
    return clamped;
}

std::vector<SyntheticArmSpec> linspace_arms(int num_arms, double lo, double hi, double sd) {
    if (num_arms < 2) {
        throw ConfigError("linspace_arms: need at least two arms");
    }
    std::vector<SyntheticArmSpec> arms(static_cast<std::size_t>(num_arms));
    for (int i = 0; i < num_arms; ++i) {
        arms[static_cast<std::size_t>(i)].mean =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(num_arms - 1);
        arms[static_cast<std::size_t>(i)].sd = sd;
    }
    return arms;
}

}  // namespace mtop
