#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jtac/bounds.hpp"
#include "jtac/channel.hpp"

namespace jtac::cli {

enum class method {
    lb1,
    lb2,
    lb3,
    ub,
    ba_jtac,
    ba_cb,
    tb,
};

std::string method_name(method m);

enum class sweep_variable { M, c, m, n };

std::string sweep_variable_name(sweep_variable v);

struct numerics_options {
    int x_grid_size = 32;
    double ba_tol = 1e-5;
    long ba_max_iter = 200000;
    bounds::bound_config bound_cfg;
    double tb_x = 0.0;  // 0 means "use E_m"
};

// Parsed experiment description: base channel, constraints, one swept
// variable with its grid, the methods to evaluate, numerics and output
// destination.
struct experiment_config {
    std::string name;
    channel::channel_params base;
    bool sigma_x_auto = true;  // sigma_x = tau_x/(m-1)
    double xi = 0.0;           // E_m = xi*M when > 0
    double E_m = 0.0;          // used when xi == 0
    double M = 0.0;
    sweep_variable sweep_var = sweep_variable::M;
    std::vector<double> grid;
    std::vector<method> methods;  // in config order
    numerics_options numerics;
    std::string out_dir = ".";
    bool emit_csv_file = true;
    bool emit_svg_file = true;

    // Channel and constraints at one sweep-grid value.
    channel::channel_params params_at(double sweep_value) const;
    bounds::constraint_set constraints_at(double sweep_value) const;
};

// Parse the sectioned key = value format ('#' comments). Throws
// config_error with file/line context on malformed input, unknown keys,
// non-increasing grids or incompatible method selections.
experiment_config parse_config_file(const std::string& path);
experiment_config parse_config_text(const std::string& text, const std::string& origin);

} // namespace jtac::cli
