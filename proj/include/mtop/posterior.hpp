#pragma once

#include <span>

#include "mtop/rng.hpp"
#include "mtop/student_t.hpp"

namespace mtop {

// Per-arm belief over a mean in [0, 1] under a Gaussian reward model with a
// Jeffreys prior on (mean, variance). After n rewards the posterior over the
// mean is a non-standardised Student-t with
//
//   location mu0 = sum(r_i) / n,
//   scale^2 sigma0^2 = sum((r_i - mu0)^2) / n^2,
//   nu = n,
//
// truncated to [0, 1]. Proper once n >= 2. Values are immutable after each
// update, so snapshots can be shared across threads read-only.
class TruncatedTPosterior {
  public:
    // Scale floor applied when all observed rewards are identical; the
    // untruncated posterior is singular at sigma0 = 0.
    static constexpr double kScaleSqFloor = 1e-12;

    TruncatedTPosterior() = default;

    static TruncatedTPosterior from_rewards(std::span<const double> rewards);

    // Rebuilds the sufficient statistics from posterior parameters, e.g. when
    // reloading a serialized snapshot.
    static TruncatedTPosterior from_moments(long long n, double mu0, double sigma0_sq);

    // Returns the posterior after observing one more reward in [0, 1].
    [[nodiscard]] TruncatedTPosterior updated(double reward) const;

    long long count() const { return n_; }
    double dof() const { return static_cast<double>(n_); }
    bool proper() const { return n_ >= 2; }

    double location() const;  // mu0; requires n >= 1
    double scale_sq() const;  // sigma0^2, unfloored; requires n >= 1
    bool degenerate_scale() const { return proper() && scale_sq() <= kScaleSqFloor; }

    // Mean of the [0, 1]-truncated posterior, in closed form. Throws
    // NotReadyError when the posterior is improper; returns the clamped
    // location when the scale is degenerate.
    double truncated_mean() const;

    // Inverse-CDF draw from the truncated posterior; always lands in [0, 1].
    double sample(Rng& rng) const;

    friend bool operator==(const TruncatedTPosterior&, const TruncatedTPosterior&) = default;

  private:
    long long n_ = 0;
    double sum_ = 0.0;
    double m2_ = 0.0;  // running sum of squared deviations about the mean
    // Truncation constants, precomputed when the posterior becomes proper:
    // standardised bounds and their CDF values.
    double std_lo_ = 0.0;
    double std_hi_ = 0.0;
    double cdf_lo_ = 0.0;
    double cdf_hi_ = 1.0;

    void refresh_truncation_cache();
    void require_proper(const char* op) const;
};

}  // namespace mtop
