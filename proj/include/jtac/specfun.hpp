#pragma once

namespace jtac::specfun {

struct series_control {
    double rel_tol = 1e-12;
    int max_terms = 10000;
};

// Error function (2/sqrt(pi)) * integral_0^x exp(-t^2) dt.
double erf(double x);

// Exponential integral Ei(x) = -PV integral_{-x}^inf e^{-t}/t dt.
// Throws at x = 0 (logarithmic singularity) and for x > ~700 (overflow).
double expint_ei(double x);

// 2F2(1/2,1/2; 3/2,3/2; x). Power series everywhere; an asymptotic closed
// form takes over for strongly negative x where the alternating series
// cancels catastrophically.
double hyp2f2_half(double x, series_control ctl = {});

// Differential-style entropy of a Poisson(lambda) pmf in nats, by direct
// truncated summation (tail mass < 1e-14).
double poisson_entropy(double lambda);

// E[Z^k] for Z ~ Normal(mean, variance), via the binomial expansion over
// central moments. k is capped (moment magnitudes overflow double beyond).
double gaussian_noncentral_moment(int k, double mean, double variance);

// ln(k!) for k >= 0.
double log_factorial(int k);

} // namespace jtac::specfun
