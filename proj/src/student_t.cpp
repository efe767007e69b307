#include "mtop/student_t.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtop {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) {
        d = kTiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) {
            d = kTiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) {
            c = kTiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            break;
        }
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error("regularized_incomplete_beta: bad arguments");
    }
    if (x == 0.0) {
        return 0.0;
    }
    if (x == 1.0) {
        return 1.0;
    }
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double std_t_pdf(double x, double nu) {
    if (!(nu > 0.0)) {
        throw std::domain_error("std_t_pdf: nu must be positive");
    }
    const double log_c =
        std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) - 0.5 * std::log(nu * kPi);
    return std::exp(log_c - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

double std_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) {
        throw std::domain_error("std_t_cdf: nu must be positive");
    }
    if (std::isinf(x)) {
        return x > 0 ? 1.0 : 0.0;
    }
    const double half_tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + x * x));
    return x >= 0.0 ? 1.0 - half_tail : half_tail;
}

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.70710678118654752440);
}

// Acklam's rational approximation, |error| < 1.2e-9 over (0, 1).
double std_normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("std_normal_quantile: q must be in (0, 1)");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (q < p_low) {
        const double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else if (q <= 1.0 - p_low) {
        const double r = q - 0.5;
        const double s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    } else {
        const double r = std::sqrt(-2.0 * std::log(1.0 - q));
        x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    }
    return x;
}

double std_t_quantile(double q, double nu) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("std_t_quantile: q must be in (0, 1)");
    }
    if (!(nu > 0.0)) {
        throw std::domain_error("std_t_quantile: nu must be positive");
    }
    if (q == 0.5) {
        return 0.0;
    }
    // Reduce to the lower half for a stable bracket.
    if (q > 0.5) {
        return -std_t_quantile(1.0 - q, nu);
    }

    // Initial guess from the normal quantile, inflated toward t's heavier
    // tails when nu is small.
    double x = std_normal_quantile(q);
    if (nu < 30.0) {
        x *= std::sqrt(nu / std::max(nu - 2.0, 0.5));
        // Cauchy-exact start dominates for very heavy tails.
        if (nu <= 2.0) {
            const double cauchy = std::tan(kPi * (q - 0.5));
            if (std::fabs(cauchy) > std::fabs(x)) {
                x = cauchy;
            }
        }
    }

    // Bracket the root: F is increasing, target lies in (lo, hi] with hi = 0.
    double hi = 0.0;
    double lo = std::min(x, -1.0);
    while (std_t_cdf(lo, nu) > q) {
        lo *= 8.0;
        if (lo < -1e300) {
            throw std::runtime_error("std_t_quantile: bracket expansion failed");
        }
    }
    if (x <= lo || x >= hi) {
        x = 0.5 * (lo + hi);
    }

    // Safeguarded Newton: fall back to bisection whenever the Newton step
    // leaves the bracket or the density underflows.
    for (int iter = 0; iter < 200; ++iter) {
        const double fx = std_t_cdf(x, nu) - q;
        if (fx > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double pdf = std_t_pdf(x, nu);
        double next;
        if (pdf > 1e-300) {
            next = x - fx / pdf;
        } else {
            next = 0.5 * (lo + hi);
        }
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::fabs(next - x);
        x = next;
        if (step <= 1e-14 * (std::fabs(x) + 1.0)) {
            break;
        }
    }
    return x;
}

double student_t_pdf(const TDistParams& p, double x) {
    if (!(p.sigma > 0.0)) {
        throw std::domain_error("student_t_pdf: sigma must be positive");
    }
    return std_t_pdf((x - p.mu) / p.sigma, p.nu) / p.sigma;
}

double student_t_cdf(const TDistParams& p, double x) {
    if (!(p.sigma > 0.0)) {
        throw std::domain_error("student_t_cdf: sigma must be positive");
    }
    return std_t_cdf((x - p.mu) / p.sigma, p.nu);
}

double student_t_quantile(const TDistParams& p, double q) {
    if (!(p.sigma > 0.0)) {
        throw std::domain_error("student_t_quantile: sigma must be positive");
    }
    return p.mu + p.sigma * std_t_quantile(q, p.nu);
}

}  // namespace mtop
