#pragma once

#include <string>
#include <vector>

#include "jtac/sweep.hpp"

namespace jtac::cli {

struct svg_style {
    int width = 720;
    int height = 480;
    std::string title;
    std::string y_label;  // defaults to rate units
};

// Static line plot: one polyline per method, legend, linear axes.
// Methods with infeasible points get their polyline split at the gap.
// Output bytes depend only on rows and style.
std::string format_svg_plot(const experiment_config& cfg,
                            const std::vector<sweep_row>& rows,
                            const svg_style& style, bool nats = false);

void emit_svg_plot(const experiment_config& cfg, const std::vector<sweep_row>& rows,
                   const svg_style& style, const std::string& path, bool nats = false);

} // namespace jtac::cli
