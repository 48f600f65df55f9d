#pragma once

#include <vector>

namespace jtac::channel {

// Transmitter-receiver distance d (micrometers) and diffusion coefficient
// D (micrometers^2/s).
struct channel_geometry {
    double d = 0.0;
    double D = 0.0;
};

// First-hitting dispersion parameter c = d^2 / (2 D), in seconds.
double c_from_geometry(const channel_geometry& geom);

// One channel instance: dispersion c, symbol slotting, release grid, noise.
// Release times are j*sigma_x for j = 0..m-1 inside a window tau_x; the
// receiver splits the slot T_s into n bins of width t_b.
struct channel_params {
    double c = 1.0;        // seconds
    double T_s = 1.0;      // seconds
    double t_b = 1.0;      // seconds
    double sigma_x = 0.0;  // seconds
    double tau_x = 0.0;    // seconds
    int m = 1;
    int n = 1;
    double lambda0 = 0.0;  // mean noise molecules per bin

    // Throws config_error on inconsistent slotting (n*t_b != T_s,
    // (m-1)*sigma_x > tau_x, tau_x > T_s, c <= 0, lambda0 < 0, size caps).
    void validate() const;
};

// First-hitting time density at t for a molecule released at `release`:
// sqrt(c / (2 pi (t-release)^3)) * exp(-c / (2 (t-release))), 0 for
// t <= release.
double levy_pdf(double t, double release, double c);

// P(hit <= t | released at `release`) = erfc-style tail of the density above.
double levy_cdf(double t, double release, double c);

// p_ij: probability a molecule released at j*sigma_x hits the receiver
// inside bin i (1-based), i.e. during ((i-1) t_b, i t_b]. The lower
// integration limit clamps to the release time when the release falls inside
// the bin; releases at or after the bin's end give 0.
double arrival_prob(int i, int j, const channel_params& params);

// Dense n x m matrix of arrival probabilities plus the derived statistics
// used by the bounds: row maxima p_i*, column sums p'_j, p* = max_j p'_j,
// row minima p~_i, and adjacent-row differences/sums q_ij, q'_ij.
struct arrival_matrix {
    int n = 0;
    int m = 0;
    std::vector<double> p;          // n*m, row-major
    std::vector<double> p_i_star;   // n
    std::vector<double> p_prime_j;  // m
    double p_star = 0.0;
    std::vector<double> p_tilde_i;  // n
    std::vector<double> q;          // (n-1)*m, row i corresponds to bins (i+1,i)
    std::vector<double> q_prime;    // (n-1)*m

    double at(int i, int j) const { return p[(i - 1) * m + j]; }          // i in 1..n
    double q_at(int i, int j) const { return q[(i - 2) * m + j]; }        // i in 2..n
    double q_prime_at(int i, int j) const { return q_prime[(i - 2) * m + j]; }
};

arrival_matrix make_arrival_matrix(const channel_params& params);

// Poisson pmf with mean x*p_ij + lambda0 at count y.
double poisson_likelihood(long y, double x, int i, int j,
                          const arrival_matrix& A, double lambda0);

// Poisson pmf with mean x*p'_j + n*lambda0 at count y (law of the bin sum).
double sum_likelihood(long y, double x, int j,
                      const arrival_matrix& A, double lambda0);

// Gaussian density with mean x*q_ij and variance x*q'_ij at y (approximate
// law of the adjacent-bin difference). Throws numeric_error when the
// variance degenerates.
double diff_likelihood(double y, double x, int i, int j,
                       const arrival_matrix& A);

} // namespace jtac::channel
