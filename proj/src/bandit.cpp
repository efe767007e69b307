#include "mtop/bandit.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mtop/errors.hpp"

namespace mtop {

bool Recommendation::contains(int arm) const {
    return std::binary_search(arms.begin(), arms.end(), arm);
}

History::History(int num_arms) : counts_(static_cast<std::size_t>(num_arms), 0) {
    if (num_arms < 1) {
        throw std::invalid_argument("History: num_arms must be positive");
    }
}

void History::append(int arm, Reward reward) {
    if (arm < 0 || arm >= num_arms()) {
        throw InvalidArmError("History::append: arm " + std::to_string(arm) + " out of range");
    }
    entries_.emplace_back(arm, reward);
    ++counts_[static_cast<std::size_t>(arm)];
}

History History::from_entries(int num_arms, std::span<const std::pair<int, Reward>> entries) {
    History h(num_arms);
    for (const auto& [arm, reward] : entries) {
        h.append(arm, reward);
    }
    return h;
}

long long History::pull_count(int arm) const {
    if (arm < 0 || arm >= num_arms()) {
        throw InvalidArmError("History::pull_count: arm " + std::to_string(arm) + " out of range");
    }
    return counts_[static_cast<std::size_t>(arm)];
}

std::vector<Reward> History::rewards_for(int arm) const {
    std::vector<Reward> out;
    out.reserve(static_cast<std::size_t>(pull_count(arm)));
    for (const auto& [a, r] : entries_) {
        if (a == arm) {
            out.push_back(r);
        }
    }
    return out;
}

void Environment::require_valid_arm(int arm) const {
    if (arm < 0 || arm >= num_arms()) {
        throw InvalidArmError("environment pull: arm " + std::to_string(arm) +
                              " out of range [0, " + std::to_string(num_arms()) + ")");
    }
}

std::vector<int> top_m_by_score(std::span<const double> scores, int m) {
    const int k = static_cast<int>(scores.size());
    if (m < 1 || m >= k) {
        throw std::invalid_argument("top_m_by_score: need 1 <= m < K");
    }
    std::vector<int> order(scores.size());
    for (int i = 0; i < k; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    std::partial_sort(order.begin(), order.begin() + m, order.end(), [&](int a, int b) {
        if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)]) {
            return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
        }
        return a < b;
    });
    std::vector<int> top(order.begin(), order.begin() + m);
    std::sort(top.begin(), top.end());
    return top;
}

}  // namespace mtop
