#pragma once

#include <string>
#include <vector>

#include "jtac/sweep.hpp"

namespace jtac::cli {

// Serialize rows with 17 significant digits, '.' decimal separator and LF
// line endings. Schema: sweep_var, sweep_value, method columns in config
// order, diagnostics, status. Rates in bits unless nats is set.
std::string format_csv(const experiment_config& cfg,
                       const std::vector<sweep_row>& rows, bool nats = false);

// format_csv + write; I/O failures throw with the path in the message.
void emit_csv(const experiment_config& cfg, const std::vector<sweep_row>& rows,
              const std::string& path, bool nats = false);

} // namespace jtac::cli
