#include "mtop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mtop/bandit.hpp"
#include "mtop/errors.hpp"

namespace mtop {

namespace {

double binomial_se(double p, long long n) {
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

// Arms ordered by descending value, index tie-break; out[r] = arm at rank r+1.
void rank_order(std::span<const double> values, std::vector<int>& out) {
    const int k = static_cast<int>(values.size());
    out.resize(values.size());
    std::iota(out.begin(), out.end(), 0);
    std::sort(out.begin(), out.end(), [&](int a, int b) {
        if (values[static_cast<std::size_t>(a)] != values[static_cast<std::size_t>(b)]) {
            return values[static_cast<std::size_t>(a)] > values[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    (void)k;
}

}  // namespace

BoundaryReport estimate_boundary_probabilities(const std::vector<MeanSampler>& samplers, int m,
                                               long long n_mc, Rng& rng) {
    const int k = static_cast<int>(samplers.size());
    if (k < 2 || m < 1 || m >= k) {
        throw std::invalid_argument("estimate_boundary_probabilities: need 1 <= m < K");
    }
    if (n_mc < 10000) {
        throw std::invalid_argument("estimate_boundary_probabilities: need n_mc >= 10^4");
    }

    std::vector<long long> rank_in_jstar(static_cast<std::size_t>(k), 0);
    long long mismatches = 0;
    double d1_sum = 0.0;
    double d1_sum_sq = 0.0;
    double d2_sum = 0.0;
    double d2_sum_sq = 0.0;
    std::vector<std::vector<long long>> counts_belief(
        static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(k), 0));
    std::vector<std::vector<long long>> counts_ts = counts_belief;

    std::vector<double> belief(static_cast<std::size_t>(k));
    std::vector<double> thompson(static_cast<std::size_t>(k));
    std::vector<int> belief_order;
    std::vector<int> ts_order;
    std::vector<char> in_jstar(static_cast<std::size_t>(k), 0);

    for (long long it = 0; it < n_mc; ++it) {
        for (int a = 0; a < k; ++a) {
            belief[static_cast<std::size_t>(a)] = samplers[static_cast<std::size_t>(a)](rng);
        }
        for (int a = 0; a < k; ++a) {
            thompson[static_cast<std::size_t>(a)] = samplers[static_cast<std::size_t>(a)](rng);
        }
        rank_order(belief, belief_order);
        rank_order(thompson, ts_order);

        std::fill(in_jstar.begin(), in_jstar.end(), 0);
        for (int r = 0; r < m; ++r) {
            in_jstar[static_cast<std::size_t>(belief_order[static_cast<std::size_t>(r)])] = 1;
        }

        bool mismatch = false;
        long long suboptimal_hits = 0;  // rho- ranks landing in J*
        long long optimal_misses = 0;   // rho+ ranks landing outside J*
        for (int r = 0; r < k; ++r) {
            const int arm = ts_order[static_cast<std::size_t>(r)];
            const bool hit = in_jstar[static_cast<std::size_t>(arm)] != 0;
            if (hit) {
                ++rank_in_jstar[static_cast<std::size_t>(r)];
            }
            if (r < m && !hit) {
                mismatch = true;
                ++optimal_misses;
            }
            if (r >= m && hit) {
                ++suboptimal_hits;
            }
            ++counts_belief[static_cast<std::size_t>(r)]
                           [static_cast<std::size_t>(belief_order[static_cast<std::size_t>(r)])];
            ++counts_ts[static_cast<std::size_t>(r)][static_cast<std::size_t>(arm)];
        }
        if (mismatch) {
            ++mismatches;
        }
        const bool boundary_below_in = in_jstar[static_cast<std::size_t>(
                                           ts_order[static_cast<std::size_t>(m)])] != 0;
        const bool boundary_above_out = in_jstar[static_cast<std::size_t>(
                                            ts_order[static_cast<std::size_t>(m - 1)])] == 0;
        const double d1 = static_cast<double>(suboptimal_hits) / static_cast<double>(k - m) -
                          (boundary_below_in ? 1.0 : 0.0);
        const double d2 = static_cast<double>(optimal_misses) / static_cast<double>(m) -
                          (boundary_above_out ? 1.0 : 0.0);
        d1_sum += d1;
        d1_sum_sq += d1 * d1;
        d2_sum += d2;
        d2_sum_sq += d2 * d2;
    }

    BoundaryReport report;
    report.num_arms = k;
    report.m = m;
    report.n_mc = n_mc;
    report.p_rank_in_jstar.resize(static_cast<std::size_t>(k));
    report.se_rank_in_jstar.resize(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) {
        const double p = static_cast<double>(rank_in_jstar[static_cast<std::size_t>(r)]) /
                         static_cast<double>(n_mc);
        report.p_rank_in_jstar[static_cast<std::size_t>(r)] = p;
        report.se_rank_in_jstar[static_cast<std::size_t>(r)] = binomial_se(p, n_mc);
    }
    report.p_mismatch = static_cast<double>(mismatches) / static_cast<double>(n_mc);
    report.se_mismatch = binomial_se(report.p_mismatch, n_mc);

    report.bound_plain = 0.0;
    for (int r = m; r < k; ++r) {
        report.bound_plain += report.p_rank_in_jstar[static_cast<std::size_t>(r)];
    }
    report.bound_h1 =
        static_cast<double>(k - m) * report.p_rank_in_jstar[static_cast<std::size_t>(m)];
    report.bound_h2 = static_cast<double>(m) *
                      (1.0 - report.p_rank_in_jstar[static_cast<std::size_t>(m - 1)]);

    const double n = static_cast<double>(n_mc);
    report.h1_lhs = report.bound_plain / static_cast<double>(k - m);
    report.h1_rhs = report.p_rank_in_jstar[static_cast<std::size_t>(m)];
    const double d1_mean = d1_sum / n;
    const double d1_var = std::max(0.0, (d1_sum_sq - n * d1_mean * d1_mean) / (n - 1.0));
    report.h1_margin_se = std::sqrt(d1_var / n);
    report.heuristic1_holds = d1_mean <= 3.0 * report.h1_margin_se;

    report.h2_lhs = 0.0;
    for (int r = 0; r < m; ++r) {
        report.h2_lhs += 1.0 - report.p_rank_in_jstar[static_cast<std::size_t>(r)];
    }
    report.h2_lhs /= static_cast<double>(m);
    report.h2_rhs = 1.0 - report.p_rank_in_jstar[static_cast<std::size_t>(m - 1)];
    const double d2_mean = d2_sum / n;
    const double d2_var = std::max(0.0, (d2_sum_sq - n * d2_mean * d2_mean) / (n - 1.0));
    report.h2_margin_se = std::sqrt(d2_var / n);
    report.heuristic2_holds = d2_mean <= 3.0 * report.h2_margin_se;

    report.rank_arm_counts_belief = std::move(counts_belief);
    report.rank_arm_counts_ts = std::move(counts_ts);
    return report;
}

BoundaryReport estimate_boundary_probabilities(std::span<const TruncatedTPosterior> posteriors,
                                               int m, long long n_mc, Rng& rng) {
    std::vector<MeanSampler> samplers;
    samplers.reserve(posteriors.size());
    for (const TruncatedTPosterior& p : posteriors) {
        if (!p.proper()) {
            throw NotReadyError("boundary diagnostics: all posteriors must be proper");
        }
        samplers.emplace_back([&p](Rng& r) { return p.sample(r); });
    }
    return estimate_boundary_probabilities(samplers, m, n_mc, rng);
}

BoundCheck check_union_bounds(const BoundaryReport& report) {
    BoundCheck check;
    check.heuristic1_holds = report.heuristic1_holds;
    check.heuristic2_holds = report.heuristic2_holds;

    double se_sum = report.se_mismatch;
    for (int r = report.m; r < report.num_arms; ++r) {
        se_sum += report.se_rank_in_jstar[static_cast<std::size_t>(r)];
    }
    check.plain_margin = report.bound_plain - report.p_mismatch;
    check.plain_ok = check.plain_margin >= -3.0 * se_sum;

    if (report.heuristic1_holds) {
        const double se = report.se_mismatch +
                          static_cast<double>(report.num_arms - report.m) *
                              report.se_rank_in_jstar[static_cast<std::size_t>(report.m)];
        check.h1_chain_margin = report.bound_h1 - report.p_mismatch;
        check.h1_chain_ok = check.h1_chain_margin >= -3.0 * se;
    }
    if (report.heuristic2_holds) {
        const double se = report.se_mismatch +
                          static_cast<double>(report.m) *
                              report.se_rank_in_jstar[static_cast<std::size_t>(report.m - 1)];
        check.h2_chain_margin = report.bound_h2 - report.p_mismatch;
        check.h2_chain_ok = check.h2_chain_margin >= -3.0 * se;
    }
    return check;
}

nlohmann::json BoundaryReport::to_json() const {
    nlohmann::json j;
    j["num_arms"] = num_arms;
    j["m"] = m;
    j["n_mc"] = n_mc;
    j["p_rank_in_jstar"] = p_rank_in_jstar;
    j["se_rank_in_jstar"] = se_rank_in_jstar;
    j["p_mismatch"] = p_mismatch;
    j["se_mismatch"] = se_mismatch;
    j["bound_plain"] = bound_plain;
    j["bound_h1"] = bound_h1;
    j["bound_h2"] = bound_h2;
    j["h1_lhs"] = h1_lhs;
    j["h1_rhs"] = h1_rhs;
    j["h1_margin_se"] = h1_margin_se;
    j["heuristic1_holds"] = heuristic1_holds;
    j["h2_lhs"] = h2_lhs;
    j["h2_rhs"] = h2_rhs;
    j["h2_margin_se"] = h2_margin_se;
    j["heuristic2_holds"] = heuristic2_holds;
    return j;
}

nlohmann::json BoundCheck::to_json() const {
    nlohmann::json j;
    j["plain_ok"] = plain_ok;
    j["plain_margin"] = plain_margin;
    j["h1_chain_ok"] = h1_chain_ok;
    j["h1_chain_margin"] = h1_chain_margin;
    j["h2_chain_ok"] = h2_chain_ok;
    j["h2_chain_margin"] = h2_chain_margin;
    j["heuristic1_holds"] = heuristic1_holds;
    j["heuristic2_holds"] = heuristic2_holds;
    return j;
}

}  // namespace mtop
