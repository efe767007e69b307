#include "mtop/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mtop/errors.hpp"

namespace mtop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_arm_count(int num_arms, int m) {
    if (num_arms < 2) {
        throw std::invalid_argument("explorer: need at least two arms");
    }
    if (m < 1 || m >= num_arms) {
        throw std::invalid_argument("explorer: need 1 <= m < K");
    }
}

}  // namespace

double atlucb_beta(long long n, long long t, int num_arms, double delta) {
    if (n < 0 || t < 1 || num_arms < 1) {
        throw std::invalid_argument("atlucb_beta: bad arguments");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("atlucb_beta: delta must be in (0, 1]");
    }
    if (n == 0) {
        return kInf;
    }
    const double td = static_cast<double>(t);
    const double arg = 1.25 * static_cast<double>(num_arms) * td * td * td * td / delta;
    return std::sqrt(std::log(arg) / (2.0 * static_cast<double>(n)));
}

std::vector<int> empirical_top_m(std::span<const long long> counts,
                                 std::span<const double> means, int m) {
    std::vector<double> scores(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        scores[i] = counts[i] > 0 ? means[i] : -kInf;
    }
    return top_m_by_score(scores, m);
}

// ---------------------------------------------------------------------------
// BFTS

Bfts::Bfts(int num_arms, int m) : num_arms_(num_arms), m_(m) {
    check_arm_count(num_arms, m);
    posteriors_.resize(static_cast<std::size_t>(num_arms));
}

const TruncatedTPosterior& Bfts::posterior(int arm) const {
    if (arm < 0 || arm >= num_arms_) {
        throw InvalidArmError("Bfts::posterior: arm out of range");
    }
    return posteriors_[static_cast<std::size_t>(arm)];
}

int Bfts::select_arm(Rng& rng, std::vector<double>& sampled_means_out, int& coin_out) {
    sampled_means_out.clear();
    coin_out = -1;
    if (in_warmup()) {
        return static_cast<int>(total_pulls_ % num_arms_);
    }
    sampled_means_out.resize(static_cast<std::size_t>(num_arms_));
    for (int a = 0; a < num_arms_; ++a) {
        sampled_means_out[static_cast<std::size_t>(a)] =
            posteriors_[static_cast<std::size_t>(a)].sample(rng);
    }
    coin_out = rng.bernoulli(0.5) ? 1 : 0;
    // Arm at sampled rank m + b (1-indexed), ties toward the lower index.
    const int rank = m_ + coin_out;
    std::vector<int> order(static_cast<std::size_t>(num_arms_));
    for (int i = 0; i < num_arms_; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::nth_element(order.begin(), order.begin() + (rank - 1), order.end(), [&](int a, int b) {
        const double sa = sampled_means_out[static_cast<std::size_t>(a)];
        const double sb = sampled_means_out[static_cast<std::size_t>(b)];
        if (sa != sb) {
            return sa > sb;
        }
        return a < b;
    });
    return order[static_cast<std::size_t>(rank - 1)];
}

StepResult Bfts::step(Environment& env, Rng& rng) {
    if (env.num_arms() != num_arms_) {
        throw std::invalid_argument("Bfts::step: environment arm count mismatch");
    }
    StepResult result;
    result.t = ++t_;
    int coin = -1;
    const int arm = select_arm(rng, result.sampled_means, coin);
    const double reward = env.pull(arm, rng);
    posteriors_[static_cast<std::size_t>(arm)] =
        posteriors_[static_cast<std::size_t>(arm)].updated(reward);
    ++total_pulls_;
    result.pulled.push_back(arm);
    result.rewards.push_back(reward);
    result.recommendation = recommend();
    return result;
}

Recommendation Bfts::recommend() const {
    Recommendation rec;
    rec.timestep = t_;
    if (in_warmup()) {
        // Inside the warm-up, fall back to the empirical top-m.
        std::vector<double> scores(static_cast<std::size_t>(num_arms_));
        for (int a = 0; a < num_arms_; ++a) {
            const auto& p = posteriors_[static_cast<std::size_t>(a)];
            scores[static_cast<std::size_t>(a)] = p.count() > 0 ? p.location() : -kInf;
        }
        rec.arms = top_m_by_score(scores, m_);
        return rec;
    }
    std::vector<double> scores(static_cast<std::size_t>(num_arms_));
    for (int a = 0; a < num_arms_; ++a) {
        scores[static_cast<std::size_t>(a)] =
            posteriors_[static_cast<std::size_t>(a)].truncated_mean();
    }
    rec.arms = top_m_by_score(scores, m_);
    return rec;
}

long long Bfts::pull_count(int arm) const {
    return posterior(arm).count();
}

// ---------------------------------------------------------------------------
// AT-LUCB

AtLucb::AtLucb(int num_arms, int m, AtLucbParams params)
    : num_arms_(num_arms), m_(m), params_(params) {
    check_arm_count(num_arms, m);
    if (!(params_.delta1 > 0.0 && params_.delta1 < 1.0)) {
        // The paper states the admissible range as "delta_1 <= [1/200, K]",
        // which is not interpretable as written; we require (0, 1).
        throw std::invalid_argument("AtLucb: delta1 must be in (0, 1)");
    }
    if (!(params_.alpha > 0.0 && params_.alpha < 1.0)) {
        throw std::invalid_argument("AtLucb: alpha must be in (0, 1)");
    }
    if (params_.epsilon < 0.0) {
        throw std::invalid_argument("AtLucb: epsilon must be >= 0");
    }
    counts_.assign(static_cast<std::size_t>(num_arms), 0);
    means_.assign(static_cast<std::size_t>(num_arms), 0.0);
}

double AtLucb::delta_at(int stage) const {
    return params_.delta1 * std::pow(params_.alpha, stage - 1);
}

double AtLucb::log_delta_at(int stage) const {
    // delta_s = delta1 * alpha^(s-1) underflows double for very large stage
    // indices; all internal bound computations stay in log space.
    return std::log(params_.delta1) + (stage - 1) * std::log(params_.alpha);
}

bool AtLucb::initialized() const {
    return init_cursor_ >= num_arms_;
}

std::vector<int> AtLucb::empirical_top_m() const {
    return mtop::empirical_top_m(counts_, means_, m_);
}

std::vector<int> AtLucb::high_set() const {
    return empirical_top_m();
}

std::pair<double, double> AtLucb::bounds_log(int arm, double log_delta) const {
    if (arm < 0 || arm >= num_arms_) {
        throw InvalidArmError("AtLucb::bounds: arm out of range");
    }
    const long long n = counts_[static_cast<std::size_t>(arm)];
    if (n == 0) {
        return {-kInf, kInf};
    }
    const double t = static_cast<double>(std::max<long long>(t_, 1));
    const double log_arg = std::log(1.25 * static_cast<double>(num_arms_)) +
                           4.0 * std::log(t) - log_delta;
    const double beta = std::sqrt(log_arg / (2.0 * static_cast<double>(n)));
    const double mean = means_[static_cast<std::size_t>(arm)];
    return {mean - beta, mean + beta};
}

std::pair<double, double> AtLucb::bounds(int arm, double delta) const {
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("AtLucb::bounds: delta must be in (0, 1]");
    }
    return bounds_log(arm, std::log(delta));
}

std::pair<int, int> AtLucb::select_pair_log(double log_delta) const {
    const std::vector<int> high = high_set();
    std::vector<bool> in_high(static_cast<std::size_t>(num_arms_), false);
    for (int a : high) {
        in_high[static_cast<std::size_t>(a)] = true;
    }
    int h_star = -1;
    double h_score = kInf;
    for (int a : high) {
        const double lower = bounds_log(a, log_delta).first;
        if (lower < h_score) {
            h_score = lower;
            h_star = a;
        }
    }
    int l_star = -1;
    double l_score = -kInf;
    for (int a = 0; a < num_arms_; ++a) {
        if (in_high[static_cast<std::size_t>(a)]) {
            continue;
        }
        const double upper = bounds_log(a, log_delta).second;
        if (upper > l_score || l_star < 0) {
            l_score = upper;
            l_star = a;
        }
    }
    return {h_star, l_star};
}

std::pair<int, int> AtLucb::select_pair(double delta) const {
    return select_pair_log(std::log(delta));
}

bool AtLucb::termination_log(double log_delta) const {
    const auto [h_star, l_star] = select_pair_log(log_delta);
    const double lower_h = bounds_log(h_star, log_delta).first;
    const double upper_l = bounds_log(l_star, log_delta).second;
    return upper_l - lower_h < params_.epsilon;
}

bool AtLucb::termination(double delta) const {
    return termination_log(std::log(delta));
}

void AtLucb::observe(int arm, double reward) {
    auto& n = counts_[static_cast<std::size_t>(arm)];
    auto& mean = means_[static_cast<std::size_t>(arm)];
    ++n;
    mean += (reward - mean) / static_cast<double>(n);
}

StepResult AtLucb::step(Environment& env, Rng& rng) {
    if (env.num_arms() != num_arms_) {
        throw std::invalid_argument("AtLucb::step: environment arm count mismatch");
    }
    StepResult result;
    result.t = ++t_;

    // J is fixed before the pulls; the pulls never change this step's
    // recommendation. Unpulled arms carry infinite bounds, so termination is
    // automatically false until every arm has been pulled once.
    if (termination_log(log_delta_at(stage_))) {
        // Escalate while termination still holds at the tighter delta.
        do {
            ++stage_;
        } while (termination_log(log_delta_at(stage_)));
        current_j_ = empirical_top_m();
    } else if (stage_ == 1) {
        current_j_ = empirical_top_m();
    }

    int first = -1;
    int second = -1;
    if (!initialized()) {
        // One round-robin pass before bound-based selection (beta is
        // undefined at n = 0); two pulls per step like the main loop.
        first = init_cursor_ % num_arms_;
        second = (init_cursor_ + 1) % num_arms_;
        init_cursor_ += 2;
    } else {
        std::tie(first, second) = select_pair_log(log_delta_at(stage_));
    }

    const double reward_first = env.pull(first, rng);
    observe(first, reward_first);
    const double reward_second = env.pull(second, rng);
    observe(second, reward_second);

    result.pulled = {first, second};
    result.rewards = {reward_first, reward_second};
    result.stage = stage_;
    result.recommendation = recommend();
    return result;
}

Recommendation AtLucb::recommend() const {
    Recommendation rec;
    rec.timestep = t_;
    rec.arms = current_j_.empty() ? empirical_top_m() : current_j_;
    return rec;
}

long long AtLucb::pull_count(int arm) const {
    if (arm < 0 || arm >= num_arms_) {
        throw InvalidArmError("AtLucb::pull_count: arm out of range");
    }
    return counts_[static_cast<std::size_t>(arm)];
}

// ---------------------------------------------------------------------------
// Uniform

UniformSampler::UniformSampler(int num_arms, int m) : num_arms_(num_arms), m_(m) {
    check_arm_count(num_arms, m);
    counts_.assign(static_cast<std::size_t>(num_arms), 0);
    means_.assign(static_cast<std::size_t>(num_arms), 0.0);
}

int UniformSampler::select_arm() const {
    int best = 0;
    for (int a = 1; a < num_arms_; ++a) {
        if (counts_[static_cast<std::size_t>(a)] < counts_[static_cast<std::size_t>(best)]) {
            best = a;
        }
    }
    return best;
}

StepResult UniformSampler::step(Environment& env, Rng& rng) {
    if (env.num_arms() != num_arms_) {
        throw std::invalid_argument("UniformSampler::step: environment arm count mismatch");
    }
    StepResult result;
    result.t = ++t_;
    const int arm = select_arm();
    const double reward = env.pull(arm, rng);
    auto& n = counts_[static_cast<std::size_t>(arm)];
    auto& mean = means_[static_cast<std::size_t>(arm)];
    ++n;
    mean += (reward - mean) / static_cast<double>(n);
    result.pulled.push_back(arm);
    result.rewards.push_back(reward);
    result.recommendation = recommend();
    return result;
}

Recommendation UniformSampler::recommend() const {
    Recommendation rec;
    rec.timestep = t_;
    rec.arms = empirical_top_m(counts_, means_, m_);
    return rec;
}

long long UniformSampler::pull_count(int arm) const {
    if (arm < 0 || arm >= num_arms_) {
        throw InvalidArmError("UniformSampler::pull_count: arm out of range");
    }
    return counts_[static_cast<std::size_t>(arm)];
}

}  // namespace mtop
