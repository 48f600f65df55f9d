#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "jtac/bounds.hpp"
#include "jtac/channel.hpp"
#include "jtac/rate.hpp"

namespace jtac::capacity {

using bounds::constraint_set;
using channel::arrival_matrix;

// Finite-alphabet channel for the iterative capacity computation.
// Outputs are count vectors (y_1..y_n) with per-coordinate truncation,
// flattened row-major; output_shape holds the per-coordinate sizes.
struct discrete_channel {
    std::vector<std::pair<double, int>> inputs;  // (concentration x, release index j)
    std::vector<double> input_costs;             // cost = x
    std::vector<long> output_shape;
    std::vector<double> W;                       // |inputs| x |outputs|, row-stochastic
    std::vector<double> tail_mass_dropped;       // per input row, before renormalization

    std::size_t num_inputs() const { return inputs.size(); }
    std::size_t num_outputs() const {
        std::size_t s = 1;
        for (long k : output_shape) s *= static_cast<std::size_t>(k);
        return s;
    }
    // Decode a flattened output index into the count vector it represents.
    std::vector<long> output_symbol(std::size_t index) const;
};

struct capacity_result {
    rate capacity;
    std::vector<double> input_distribution;
    long iterations = 0;        // total inner iterations
    double gap = 0.0;           // upper/lower capacity gap at termination
    double multiplier = 0.0;    // cost multiplier (0 when unconstrained)
    double achieved_mean_cost = 0.0;
};

// Joint time-and-concentration channel on a uniform x grid over [0, M]
// crossed with all m release times; outputs truncated per coordinate at
// Poisson tail mass y_tail_mass/n. Throws size_error past the caps.
discrete_channel discretize_jtac(const arrival_matrix& A, const constraint_set& cons,
                                 int x_grid_size, double lambda0,
                                 double y_tail_mass = 1e-12,
                                 std::size_t output_cap = 2000000);

// Concentration-only baseline: release time pinned to j = 0 and the scalar
// bin sum as output (sufficient statistic for the fixed-release family).
discrete_channel discretize_cb(const arrival_matrix& A, const constraint_set& cons,
                               int x_grid_size, double lambda0,
                               double y_tail_mass = 1e-12,
                               std::size_t output_cap = 2000000);

// Alternating-maximization capacity with the per-iteration max/avg
// divergence sandwich as stopping rule (gap <= tol). With cost_cap set,
// runs the cost-multiplier form and bisects the multiplier until the
// achieved mean cost lands in [cap - tol_c, cap] (or the unconstrained
// optimum already satisfies the cap). Throws convergence_error past
// max_iter.
capacity_result blahut_arimoto(const discrete_channel& ch,
                               std::optional<double> cost_cap,
                               double tol = 1e-6, long max_iter = 200000,
                               int outer_iters = 12, double tol_c = 0.0);

// Exact finite-alphabet mutual information in nats for a given input law.
rate mutual_information(const discrete_channel& ch,
                        const std::vector<double>& input_dist);

struct tb_result {
    rate value;
    int argmax_interval = 0;
};

// Timing-only baseline: max_i I(T_x; Y_i) at fixed concentration x with
// uniform release times (optionally optimizing the release-time law by the
// same alternating maximization).
tb_result tb_rate(const arrival_matrix& A, double x_fixed, double lambda0,
                  bool optimize_timing_law = false, double y_tail_mass = 1e-12);

} // namespace jtac::capacity
