#pragma once

#include <optional>
#include <vector>

#include "jtac/channel.hpp"
#include "jtac/rate.hpp"

namespace jtac::bounds {

using channel::arrival_matrix;

// Input concentration constraints: mean E_m and peak M (counts).
struct constraint_set {
    double E_m = 0.0;
    double M = 0.0;

    double alpha() const { return E_m / M; }
    void validate() const;  // 0 < E_m <= M
};

struct bound_config {
    double eta = 0.0;         // reference mean; 0 means "use E_m"
    int taylor_order_r = 4;   // even; mixture-entropy Taylor truncation
    double root_tol = 1e-10;
    double y_tail_mass = 1e-12;
    bool paper_literal = false;  // main-text 1/(2m) prefactor in the
                                 // difference bound instead of the appendix
                                 // assembly's 1/(4m)

    double resolved_eta(const constraint_set& cons) const {
        return eta > 0.0 ? eta : cons.E_m;
    }
};

// Root of alpha = 1/(2 mu) - exp(-mu)/(sqrt(mu pi) erf(sqrt mu)).
// The right side decreases from 1/3 (mu -> 0) to 0, so alpha must lie in
// (0, 1/3); outside that the constraint set is infeasible for this bound.
double solve_mu(double alpha, double tol = 1e-10);

// Closed-form upper bound on E[ln(1 + 1/(12 p x))] under the square-root
// input density (the exponential factor is dropped, making it an upper
// bound of the exact expectation).
double explog_correction(double p_star_i, double M, double mu);

struct lb1_result {
    rate value;
    int argmax_interval = 0;
    double mu = 0.0;
    double k = 0.0;  // harmonic-mean weight of the argmax row
};

// Best-single-bin achievable rate. Rows containing a zero arrival
// probability are skipped: their k degenerates to 0 and the construction
// behind the bound needs every release time visible in the chosen bin.
lb1_result lower_bound_1(const arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg = {});

struct phi_solution {
    double phi = 0.0;
    double c_prime = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Tilt parameter of the density c' e^{phi x} / (12 p* x + 1) on [0, M],
// chosen so the mean equals E_m. phi may be negative, zero-adjacent or
// positive; the defining equation is evaluated through its finite phi -> 0
// limit. Throws infeasible_error when E_m <= 1/(12 p*).
phi_solution solve_phi(const constraint_set& cons, double p_star,
                       double tol = 1e-10);

struct lb2_result {
    rate r1;
    rate r2;
    rate best;
    double phi = 0.0;
    double c_prime = 0.0;
    int argmax_interval = 0;  // bin of the max Poisson-entropy term
};

// Sum-channel achievable rates R1 and R2 (identical up to the
// m - ln m - 1 offset).
lb2_result lower_bound_2(const arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg = {});

struct timing_rate_result {
    rate value;
    int argmax_interval = 0;
};

// Timing information carried by a single bin at fixed concentration x:
// ln m + (1/m) sum_j H(Poisson(p_ij x)) - ln(p_i* x + 1/12), maximized
// over bins.
timing_rate_result timing_rate_given_x(const arrival_matrix& A, double x);

struct mixture_component {
    double weight = 0.0;
    double mean = 0.0;
    double variance = 0.0;
};

// Taylor-moment entropy estimate of a Gaussian mixture: the log-density is
// expanded to order r around y0 (central finite differences with Richardson
// extrapolation) and integrated against the mixture via Gaussian moments.
// Exact for a single component; for spread-out mixtures it approximates the
// cross-entropy and can land on either side of the true entropy.
double mixture_entropy_lower(const std::vector<mixture_component>& components,
                             double y0, int r);

struct lb3_result {
    rate value;
    int argmax_interval = 0;
    double u = 0.0;
};

// Adjacent-bin-difference achievable rate. u parameterizes the truncated
// half-Gaussian input density (mean matched to E_m; needs alpha < 1/2).
lb3_result lower_bound_3(const arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg = {});

// Per-bin symmetric-divergence bound
// (E_m p_i* / M)(M - E_m) ln(M p_i* / lambda0 + 1) in nats.
// Requires lambda0 > 0 and E_m <= M/2.
double sym_kl_interval_bound(const arrival_matrix& A, int i,
                             const constraint_set& cons, double lambda0);

// Capacity upper bound: sum of sym_kl_interval_bound over all bins.
rate upper_bound(const arrival_matrix& A, const constraint_set& cons,
                 double lambda0);

// Aggregate of everything the bounds module can say about one parameter
// point; sweep rows are built from this.
struct bound_report {
    std::optional<lb1_result> lb1;
    std::optional<lb2_result> lb2;
    std::optional<lb3_result> lb3;
    std::optional<timing_rate_result> timing;
    std::optional<rate> ub;
};

} // namespace jtac::bounds
