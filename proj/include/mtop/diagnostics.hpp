#pragma once

#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "mtop/posterior.hpp"
#include "mtop/rng.hpp"

namespace mtop {

// Monte-Carlo estimates of the decision-boundary misranking quantities for a
// set of posteriors. Each draw produces a PAIR of mean vectors from the
// joint posterior: one plays the belief over the true means (defining J*),
// the other plays the Thompson sample (defining J^TS); probability matching
// makes the two roles exchangeable.
struct BoundaryReport {
    int num_arms = 0;
    int m = 0;
    long long n_mc = 0;

    // p_rank_in_jstar[rho-1] estimates P_t(A^TS_rho in J*), rho = 1..K.
    std::vector<double> p_rank_in_jstar;
    std::vector<double> se_rank_in_jstar;

    double p_mismatch = 0.0;  // P_t(J* != J^TS)
    double se_mismatch = 0.0;

    // Union-bound values.
    double bound_plain = 0.0;  // sum over rho- of P_t(A^TS_rho in J*)
    double bound_h1 = 0.0;     // (K - m) * P_t(A^TS_{m+1} in J*)
    double bound_h2 = 0.0;     // m * P_t(A^TS_m in complement of J*)

    // Heuristic inequalities, estimated as per-draw differences
    // (lhs - rhs); a heuristic "holds" unless its mean difference exceeds
    // three standard errors.
    double h1_lhs = 0.0;  // E_{rho-}[P_t(A^TS_rho- in J*)]
    double h1_rhs = 0.0;  // P_t(A^TS_{m+1} in J*)
    double h1_margin_se = 0.0;
    bool heuristic1_holds = true;
    double h2_lhs = 0.0;  // E_{rho+}[P_t(A^TS_rho+ in complement of J*)]
    double h2_rhs = 0.0;  // P_t(A^TS_m in complement of J*)
    double h2_margin_se = 0.0;
    bool heuristic2_holds = true;

    // Marginal rank -> arm tallies for the two roles (probability-matching
    // diagnostics): counts[rank][arm].
    std::vector<std::vector<long long>> rank_arm_counts_belief;
    std::vector<std::vector<long long>> rank_arm_counts_ts;

    nlohmann::json to_json() const;
};

// Per-arm sampler of a posterior mean draw.
using MeanSampler = std::function<double(Rng&)>;

BoundaryReport estimate_boundary_probabilities(const std::vector<MeanSampler>& samplers, int m,
                                               long long n_mc, Rng& rng);

BoundaryReport estimate_boundary_probabilities(std::span<const TruncatedTPosterior> posteriors,
                                               int m, long long n_mc, Rng& rng);

struct BoundCheck {
    bool plain_ok = true;  // P(mismatch) <= sum over rho- (within 3 SE)
    double plain_margin = 0.0;
    bool h1_chain_ok = true;  // P(mismatch) <= (K-m) P(A^TS_{m+1} in J*), given H1
    double h1_chain_margin = 0.0;
    bool h2_chain_ok = true;  // P(mismatch) <= m P(A^TS_m in J*c), given H2
    double h2_chain_margin = 0.0;
    bool heuristic1_holds = true;
    bool heuristic2_holds = true;

    nlohmann::json to_json() const;
};

// Violations are reported, not raised: posteriors for which the heuristics
// fail do exist.
BoundCheck check_union_bounds(const BoundaryReport& report);

}  // namespace mtop
