#include "mtop/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mtop/errors.hpp"

namespace mtop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp01(double x) {
    return std::min(1.0, std::max(0.0, x));
}

}  // namespace

TruncatedTPosterior TruncatedTPosterior::from_rewards(std::span<const double> rewards) {
    TruncatedTPosterior p;
    for (double r : rewards) {
        p = p.updated(r);
    }
    return p;
}

TruncatedTPosterior TruncatedTPosterior::from_moments(long long n, double mu0, double sigma0_sq) {
    if (n < 1) {
        throw std::invalid_argument("from_moments: n must be >= 1");
    }
    TruncatedTPosterior p;
    p.n_ = n;
    p.sum_ = mu0 * static_cast<double>(n);
    p.m2_ = sigma0_sq * static_cast<double>(n) * static_cast<double>(n);
    p.refresh_truncation_cache();
    return p;
}

TruncatedTPosterior TruncatedTPosterior::updated(double reward) const {
    if (!(reward >= 0.0 && reward <= 1.0)) {
        throw std::invalid_argument("posterior update: reward must lie in [0, 1]");
    }
    TruncatedTPosterior next = *this;
    next.n_ = n_ + 1;
    next.sum_ = sum_ + reward;
    // Welford: keeps sum((r_i - mean_n)^2) exact under a running mean.
    const double mean_prev = n_ > 0 ? sum_ / static_cast<double>(n_) : 0.0;
    const double mean_next = next.sum_ / static_cast<double>(next.n_);
    next.m2_ = m2_ + (reward - mean_prev) * (reward - mean_next);
    if (next.m2_ < 0.0) {
        next.m2_ = 0.0;
    }
    next.refresh_truncation_cache();
    return next;
}

double TruncatedTPosterior::location() const {
    if (n_ < 1) {
        throw NotReadyError("posterior location undefined before the first observation");
    }
    return sum_ / static_cast<double>(n_);
}

double TruncatedTPosterior::scale_sq() const {
    if (n_ < 1) {
        throw NotReadyError("posterior scale undefined before the first observation");
    }
    return m2_ / (static_cast<double>(n_) * static_cast<double>(n_));
}

void TruncatedTPosterior::refresh_truncation_cache() {
    if (n_ < 2) {
        return;
    }
    const double raw = scale_sq();
    if (raw <= kScaleSqFloor) {
        return;  // degenerate; queries short-circuit to the location
    }
    const double sigma = std::sqrt(raw);
    const double mu = location();
    const double nu = dof();
    std_lo_ = (0.0 - mu) / sigma;
    std_hi_ = (1.0 - mu) / sigma;
    cdf_lo_ = std_t_cdf(std_lo_, nu);
    cdf_hi_ = std_t_cdf(std_hi_, nu);
}

void TruncatedTPosterior::require_proper(const char* op) const {
    if (!proper()) {
        throw NotReadyError(std::string(op) + ": posterior needs at least two observations");
    }
}

double TruncatedTPosterior::truncated_mean() const {
    require_proper("truncated_mean");
    const double mu = location();
    if (degenerate_scale()) {
        return clamp01(mu);
    }
    const double sigma = std::sqrt(scale_sq());
    const double nu = dof();
    // First moment of the standard t over [std_lo_, std_hi_]:
    //   int_a^b u f(u) du = C * nu/(nu-1) * ((1+a^2/nu)^-(nu-1)/2 - (1+b^2/nu)^-(nu-1)/2)
    // with C the standard-t normalising constant; requires nu > 1.
    const double log_c = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                         0.5 * std::log(nu * kPi);
    const double pow_lo = std::exp(-0.5 * (nu - 1.0) * std::log1p(std_lo_ * std_lo_ / nu));
    const double pow_hi = std::exp(-0.5 * (nu - 1.0) * std::log1p(std_hi_ * std_hi_ / nu));
    const double partial_first_moment = std::exp(log_c) * nu / (nu - 1.0) * (pow_lo - pow_hi);
    const double mass = cdf_hi_ - cdf_lo_;
    if (!(mass > 0.0)) {
        return clamp01(mu);
    }
    return clamp01(mu + sigma * partial_first_moment / mass);
}

double TruncatedTPosterior::sample(Rng& rng) const {
    require_proper("truncated_sample");
    const double mu = location();
    const double u = rng.uniform01();
    if (degenerate_scale()) {
        return clamp01(mu);
    }
    const double q = cdf_lo_ + u * (cdf_hi_ - cdf_lo_);
    if (!(q > 0.0 && q < 1.0)) {
        return clamp01(mu);
    }
    const double sigma = std::sqrt(scale_sq());
    return clamp01(mu + sigma * std_t_quantile(q, dof()));
}

}  // namespace mtop
