#pragma once

#include <utility>
#include <vector>

#include "mtop/bandit.hpp"
#include "mtop/posterior.hpp"

namespace mtop {

// Confidence radius used by AT-LUCB:
//   beta(n, t, delta) = sqrt( 1/(2n) * ln( (5/4) * K * t^4 / delta ) ).
// n = 0 yields +infinity, which forces an initial pull of every arm.
double atlucb_beta(long long n, long long t, int num_arms, double delta);

// Boundary Focused Thompson Sampling over truncated-t posteriors. Warm-up is
// two round-robin passes (by arm index) so every posterior is proper; after
// that, each step samples a mean from every posterior, ranks the samples, and
// pulls the arm at rank m or m+1 chosen by a fair coin. Recommendations are
// the top-m arms by analytic truncated posterior mean.
class Bfts : public Explorer {
  public:
    Bfts(int num_arms, int m);

    std::string_view name() const override { return "bfts"; }
    int pulls_per_step() const override { return 1; }
    StepResult step(Environment& env, Rng& rng) override;
    Recommendation recommend() const override;
    long long pull_count(int arm) const override;

    long long warmup_pulls() const { return 2LL * num_arms_; }
    bool in_warmup() const { return total_pulls_ < warmup_pulls(); }
    const TruncatedTPosterior& posterior(int arm) const;

    // Next arm by the sampling rule, without pulling. During warm-up this is
    // the next round-robin arm; afterwards the posterior draws and the coin
    // are reported through the out-parameters.
    int select_arm(Rng& rng, std::vector<double>& sampled_means_out, int& coin_out);

  private:
    int num_arms_;
    int m_;
    long long total_pulls_ = 0;
    long long t_ = 0;
    std::vector<TruncatedTPosterior> posteriors_;
};

struct AtLucbParams {
    double delta1 = 0.5;
    double alpha = 0.99;
    double epsilon = 0.0;
};

// Anytime LUCB. Stages carry a geometrically decaying confidence parameter
// delta_s = delta1 * alpha^(s-1); each step pulls the weakest top-m arm (by
// lower bound) and the strongest contender outside the top-m (by upper
// bound). The recommendation J freezes between stage advances except in
// stage 1, where it tracks the empirical top-m.
class AtLucb : public Explorer {
  public:
    AtLucb(int num_arms, int m, AtLucbParams params = {});

    std::string_view name() const override { return "atlucb"; }
    int pulls_per_step() const override { return 2; }
    StepResult step(Environment& env, Rng& rng) override;
    Recommendation recommend() const override;
    long long pull_count(int arm) const override;

    int stage() const { return stage_; }
    long long timestep() const { return t_; }
    double delta_at(int stage) const;
    double log_delta_at(int stage) const;
    bool initialized() const;  // every arm pulled at least once

    // (L, U) at the given delta using the current counts and timestep.
    std::pair<double, double> bounds(int arm, double delta) const;
    // (h*, l*): weakest High arm by L and strongest complement arm by U.
    std::pair<int, int> select_pair(double delta) const;
    // Term(delta, epsilon) = { U_{l*}(delta) - L_{h*}(delta) < epsilon }.
    bool termination(double delta) const;

  private:
    int num_arms_;
    int m_;
    AtLucbParams params_;
    long long t_ = 0;
    int stage_ = 1;
    std::vector<long long> counts_;
    std::vector<double> means_;
    std::vector<int> current_j_;
    int init_cursor_ = 0;

    std::pair<double, double> bounds_log(int arm, double log_delta) const;
    std::pair<int, int> select_pair_log(double log_delta) const;
    bool termination_log(double log_delta) const;
    std::vector<int> empirical_top_m() const;
    std::vector<int> high_set() const;
    void observe(int arm, double reward);
};

// Round-robin baseline: always pulls the least-sampled arm (lowest index on
// ties) and recommends the empirical top-m.
class UniformSampler : public Explorer {
  public:
    UniformSampler(int num_arms, int m);

    std::string_view name() const override { return "uniform"; }
    int pulls_per_step() const override { return 1; }
    StepResult step(Environment& env, Rng& rng) override;
    Recommendation recommend() const override;
    long long pull_count(int arm) const override;

    int select_arm() const;

  private:
    int num_arms_;
    int m_;
    long long t_ = 0;
    std::vector<long long> counts_;
    std::vector<double> means_;
};

// Scores for empirical top-m selection: unpulled arms rank below any pulled
// arm, ties resolve toward the lower index.
std::vector<int> empirical_top_m(std::span<const long long> counts,
                                 std::span<const double> means, int m);

}  // namespace mtop
