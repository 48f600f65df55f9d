#include "jtac/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace jtac::cli {

namespace {

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

} // namespace

std::string format_csv(const experiment_config& cfg, const std::vector<sweep_row>& rows,
                       bool nats) {
    const std::string unit = nats ? "nats" : "bits";
    std::string out = "sweep_var,sweep_value";
    for (method mth : cfg.methods) out += "," + method_name(mth) + "_" + unit;
    out += ",mu,phi,u,ba_gap,lb1_argmax,lb2_argmax,lb3_argmax,tb_argmax,status\n";

    const std::string var = sweep_variable_name(cfg.sweep_var);
    for (const auto& row : rows) {
        out += var + "," + fmt_full(row.sweep_value);
        for (method mth : cfg.methods) {
            out += ",";
            auto it = row.values.find(mth);
            if (it != row.values.end())
                out += fmt_full(nats ? it->second.nats : it->second.bits());
        }
        auto opt_num = [&](const std::optional<double>& v) {
            out += ",";
            if (v) out += fmt_full(*v);
        };
        auto opt_int = [&](const std::optional<int>& v) {
            out += ",";
            if (v) out += std::to_string(*v);
        };
        opt_num(row.mu);
        opt_num(row.phi);
        opt_num(row.u);
        opt_num(row.ba_gap);
        opt_int(row.lb1_argmax);
        opt_int(row.lb2_argmax);
        opt_int(row.lb3_argmax);
        opt_int(row.tb_argmax);
        out += "," + csv_escape(row.status) + "\n";
    }
    return out;
}

void emit_csv(const experiment_config& cfg, const std::vector<sweep_row>& rows,
              const std::string& path, bool nats) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    f << format_csv(cfg, rows, nats);
    f.close();
    if (!f) throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

} // namespace jtac::cli
