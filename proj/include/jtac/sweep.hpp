#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jtac/config.hpp"
#include "jtac/rate.hpp"

namespace jtac::cli {

// One evaluated sweep point. Method cells are absent when that method was
// infeasible or failed at this point; the reason lands in status.
struct sweep_row {
    double sweep_value = 0.0;
    std::map<method, rate> values;
    // diagnostics
    std::optional<double> mu, phi, u, ba_gap;
    std::optional<int> lb1_argmax, lb2_argmax, lb3_argmax, tb_argmax;
    std::string status = "ok";  // or "method:infeasible:<reason>;..." per failure
};

// Evaluate every selected method at every grid point, in grid order.
// Per-point failures are recorded in the row status; only config-level
// errors abort the run.
std::vector<sweep_row> run_sweep(const experiment_config& cfg);

} // namespace jtac::cli
