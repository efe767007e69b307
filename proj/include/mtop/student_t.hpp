#pragma once

namespace mtop {

// Location-scale Student-t parameters.
struct TDistParams {
    double mu;     // location
    double sigma;  // scale, > 0
    double nu;     // degrees of freedom, > 0
};

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
// Continued-fraction evaluation (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x);

// Standard Student-t (location 0, scale 1) with nu degrees of freedom.
double std_t_pdf(double x, double nu);
double std_t_cdf(double x, double nu);
double std_t_quantile(double q, double nu);  // q in (0, 1)

double student_t_pdf(const TDistParams& p, double x);
double student_t_cdf(const TDistParams& p, double x);
double student_t_quantile(const TDistParams& p, double q);

// Standard normal CDF and an inverse accurate to ~1e-9 (used as the Newton
// starting point for the t quantile, and for clamped-Gaussian means).
double std_normal_cdf(double x);
double std_normal_quantile(double q);

}  // namespace mtop
