#include "jtac/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "jtac/errors.hpp"

namespace jtac::cli {

std::string method_name(method m) {
    switch (m) {
        case method::lb1: return "lb1";
        case method::lb2: return "lb2";
        case method::lb3: return "lb3";
        case method::ub: return "ub";
        case method::ba_jtac: return "ba_jtac";
        case method::ba_cb: return "ba_cb";
        case method::tb: return "tb";
    }
    return "?";
}

std::string sweep_variable_name(sweep_variable v) {
    switch (v) {
        case sweep_variable::M: return "M";
        case sweep_variable::c: return "c";
        case sweep_variable::m: return "m";
        case sweep_variable::n: return "n";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw config_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, const std::string& origin, int line) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) fail(origin, line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(origin, line, "expected a number, got '" + v + "'");
    }
}

long parse_long(const std::string& v, const std::string& origin, int line) {
    try {
        size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) fail(origin, line, "trailing characters in integer '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (const std::exception&) {
        fail(origin, line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& origin, int line) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(origin, line, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : v) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

method parse_method(const std::string& v, const std::string& origin, int line) {
    if (v == "lb1") return method::lb1;
    if (v == "lb2") return method::lb2;
    if (v == "lb3") return method::lb3;
    if (v == "ub") return method::ub;
    if (v == "ba_jtac") return method::ba_jtac;
    if (v == "ba_cb") return method::ba_cb;
    if (v == "tb") return method::tb;
    fail(origin, line, "unknown method '" + v + "'");
}

} // namespace

channel::channel_params experiment_config::params_at(double sweep_value) const {
    channel::channel_params p = base;
    switch (sweep_var) {
        case sweep_variable::M:
            break;
        case sweep_variable::c:
            p.c = sweep_value;
            break;
        case sweep_variable::m:
            p.m = static_cast<int>(std::lround(sweep_value));
            break;
        case sweep_variable::n:
            p.n = static_cast<int>(std::lround(sweep_value));
            break;
    }
    p.t_b = p.T_s / p.n;
    if (sigma_x_auto) p.sigma_x = (p.m > 1) ? p.tau_x / (p.m - 1) : 0.0;
    p.validate();
    return p;
}

bounds::constraint_set experiment_config::constraints_at(double sweep_value) const {
    bounds::constraint_set cons;
    cons.M = (sweep_var == sweep_variable::M) ? sweep_value : M;
    cons.E_m = (xi > 0.0) ? xi * cons.M : E_m;
    cons.validate();
    return cons;
}

experiment_config parse_config_text(const std::string& text, const std::string& origin) {
    experiment_config cfg;
    cfg.base.lambda0 = 0.0;
    bool saw_sweep_var = false;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "channel" && section != "constraints" && section != "sweep" &&
                section != "methods" && section != "numerics" && section != "output")
                fail(origin, lineno, "unknown section [" + section + "]");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) fail(origin, lineno, "empty key or value");

        if (section == "channel") {
            if (key == "c") cfg.base.c = parse_double(val, origin, lineno);
            else if (key == "T_s") cfg.base.T_s = parse_double(val, origin, lineno);
            else if (key == "n") cfg.base.n = static_cast<int>(parse_long(val, origin, lineno));
            else if (key == "m") cfg.base.m = static_cast<int>(parse_long(val, origin, lineno));
            else if (key == "tau_x") cfg.base.tau_x = parse_double(val, origin, lineno);
            else if (key == "sigma_x") {
                if (val == "auto") {
                    cfg.sigma_x_auto = true;
                } else {
                    cfg.sigma_x_auto = false;
                    cfg.base.sigma_x = parse_double(val, origin, lineno);
                }
            }
            else if (key == "lambda0") cfg.base.lambda0 = parse_double(val, origin, lineno);
            else fail(origin, lineno, "unknown channel key '" + key + "'");
        } else if (section == "constraints") {
            if (key == "xi") cfg.xi = parse_double(val, origin, lineno);
            else if (key == "E_m") cfg.E_m = parse_double(val, origin, lineno);
            else if (key == "M") cfg.M = parse_double(val, origin, lineno);
            else fail(origin, lineno, "unknown constraints key '" + key + "'");
        } else if (section == "sweep") {
            if (key == "variable") {
                saw_sweep_var = true;
                if (val == "M") cfg.sweep_var = sweep_variable::M;
                else if (val == "c") cfg.sweep_var = sweep_variable::c;
                else if (val == "m") cfg.sweep_var = sweep_variable::m;
                else if (val == "n") cfg.sweep_var = sweep_variable::n;
                else fail(origin, lineno, "unknown sweep variable '" + val + "'");
            } else if (key == "grid") {
                cfg.grid.clear();
                for (const auto& tok : split_list(val))
                    cfg.grid.push_back(parse_double(tok, origin, lineno));
                if (cfg.grid.empty()) fail(origin, lineno, "empty sweep grid");
                for (size_t t = 1; t < cfg.grid.size(); ++t)
                    if (cfg.grid[t] <= cfg.grid[t - 1])
                        fail(origin, lineno, "sweep grid must be strictly increasing");
            } else {
                fail(origin, lineno, "unknown sweep key '" + key + "'");
            }
        } else if (section == "methods") {
            if (key == "list") {
                cfg.methods.clear();
                for (const auto& tok : split_list(val))
                    cfg.methods.push_back(parse_method(tok, origin, lineno));
                if (cfg.methods.empty()) fail(origin, lineno, "empty method list");
            } else {
                fail(origin, lineno, "unknown methods key '" + key + "'");
            }
        } else if (section == "numerics") {
            if (key == "x_grid_size")
                cfg.numerics.x_grid_size = static_cast<int>(parse_long(val, origin, lineno));
            else if (key == "ba_tol") cfg.numerics.ba_tol = parse_double(val, origin, lineno);
            else if (key == "ba_max_iter")
                cfg.numerics.ba_max_iter = parse_long(val, origin, lineno);
            else if (key == "taylor_order_r")
                cfg.numerics.bound_cfg.taylor_order_r =
                    static_cast<int>(parse_long(val, origin, lineno));
            else if (key == "eta") cfg.numerics.bound_cfg.eta = parse_double(val, origin, lineno);
            else if (key == "root_tol")
                cfg.numerics.bound_cfg.root_tol = parse_double(val, origin, lineno);
            else if (key == "y_tail_mass")
                cfg.numerics.bound_cfg.y_tail_mass = parse_double(val, origin, lineno);
            else if (key == "paper_literal")
                cfg.numerics.bound_cfg.paper_literal = parse_bool(val, origin, lineno);
            else if (key == "tb_x") cfg.numerics.tb_x = parse_double(val, origin, lineno);
            else fail(origin, lineno, "unknown numerics key '" + key + "'");
        } else if (section == "output") {
            if (key == "name") cfg.name = val;
            else if (key == "dir") cfg.out_dir = val;
            else if (key == "csv") cfg.emit_csv_file = parse_bool(val, origin, lineno);
            else if (key == "svg") cfg.emit_svg_file = parse_bool(val, origin, lineno);
            else fail(origin, lineno, "unknown output key '" + key + "'");
        } else {
            fail(origin, lineno, "key outside any section");
        }
    }

    if (!saw_sweep_var) throw config_error(origin + ": missing [sweep] variable");
    if (cfg.grid.empty()) throw config_error(origin + ": missing [sweep] grid");
    if (cfg.methods.empty()) throw config_error(origin + ": missing [methods] list");
    if (cfg.name.empty()) {
        std::string stem = origin;
        size_t slash = stem.find_last_of('/');
        if (slash != std::string::npos) stem = stem.substr(slash + 1);
        size_t dot = stem.find_last_of('.');
        if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
        cfg.name = stem.empty() ? "sweep" : stem;
    }
    if (cfg.sweep_var != sweep_variable::M && cfg.M <= 0.0)
        throw config_error(origin + ": [constraints] M required unless sweeping M");
    if (cfg.xi <= 0.0 && cfg.E_m <= 0.0)
        throw config_error(origin + ": [constraints] needs xi or E_m");
    if (cfg.xi > 0.0 && cfg.E_m > 0.0)
        throw config_error(origin + ": [constraints] xi and E_m are mutually exclusive");
    if (cfg.numerics.x_grid_size < 2)
        throw config_error(origin + ": [numerics] x_grid_size must be at least 2");
    if (cfg.numerics.ba_tol <= 0.0)
        throw config_error(origin + ": [numerics] ba_tol must be positive");
    if (cfg.sweep_var == sweep_variable::m || cfg.sweep_var == sweep_variable::n) {
        for (double v : cfg.grid)
            if (std::fabs(v - std::lround(v)) > 1e-9 || v < 1.0)
                throw config_error(origin + ": [sweep] grid for m/n must be positive integers");
    } else {
        for (double v : cfg.grid)
            if (v <= 0.0)
                throw config_error(origin + ": [sweep] grid values must be positive");
    }

    // Surface slotting/constraint inconsistencies at parse time rather than
    // at the first evaluated point.
    for (double v : cfg.grid) {
        cfg.params_at(v);
        cfg.constraints_at(v);
    }
    return cfg;
}

experiment_config parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

} // namespace jtac::cli
