#include "jtac/sweep.hpp"

#include <exception>
#include <string>

#include "jtac/capacity.hpp"
#include "jtac/errors.hpp"

namespace jtac::cli {

namespace {

std::string classify(const std::exception& e) {
    if (dynamic_cast<const infeasible_error*>(&e)) return "infeasible";
    if (dynamic_cast<const convergence_error*>(&e)) return "no-convergence";
    if (dynamic_cast<const size_error*>(&e)) return "size";
    if (dynamic_cast<const numeric_error*>(&e)) return "numeric";
    return "error";
}

} // namespace

std::vector<sweep_row> run_sweep(const experiment_config& cfg) {
    std::vector<sweep_row> rows;
    rows.reserve(cfg.grid.size());
    for (double v : cfg.grid) {
        sweep_row row;
        row.sweep_value = v;
        channel::channel_params params = cfg.params_at(v);
        bounds::constraint_set cons = cfg.constraints_at(v);
        channel::arrival_matrix A = channel::make_arrival_matrix(params);
        std::string status;

        for (method mth : cfg.methods) {
            try {
                switch (mth) {
                    case method::lb1: {
                        auto r = bounds::lower_bound_1(A, cons, cfg.numerics.bound_cfg);
                        row.values[mth] = r.value;
                        row.mu = r.mu;
                        row.lb1_argmax = r.argmax_interval;
                        break;
                    }
                    case method::lb2: {
                        auto r = bounds::lower_bound_2(A, cons, cfg.numerics.bound_cfg);
                        row.values[mth] = r.best;
                        row.phi = r.phi;
                        row.lb2_argmax = r.argmax_interval;
                        break;
                    }
                    case method::lb3: {
                        auto r = bounds::lower_bound_3(A, cons, cfg.numerics.bound_cfg);
                        row.values[mth] = r.value;
                        row.u = r.u;
                        row.lb3_argmax = r.argmax_interval;
                        break;
                    }
                    case method::ub: {
                        row.values[mth] = bounds::upper_bound(A, cons, params.lambda0);
                        break;
                    }
                    case method::ba_jtac: {
                        auto ch = capacity::discretize_jtac(
                            A, cons, cfg.numerics.x_grid_size, params.lambda0,
                            cfg.numerics.bound_cfg.y_tail_mass);
                        auto r = capacity::blahut_arimoto(ch, cons.E_m, cfg.numerics.ba_tol,
                                                          cfg.numerics.ba_max_iter);
                        row.values[mth] = r.capacity;
                        row.ba_gap = r.gap;
                        break;
                    }
                    case method::ba_cb: {
                        auto ch = capacity::discretize_cb(
                            A, cons, cfg.numerics.x_grid_size, params.lambda0,
                            cfg.numerics.bound_cfg.y_tail_mass);
                        auto r = capacity::blahut_arimoto(ch, cons.E_m, cfg.numerics.ba_tol,
                                                          cfg.numerics.ba_max_iter);
                        row.values[mth] = r.capacity;
                        if (!row.ba_gap) row.ba_gap = r.gap;
                        break;
                    }
                    case method::tb: {
                        double x = (cfg.numerics.tb_x > 0.0) ? cfg.numerics.tb_x : cons.E_m;
                        auto r = capacity::tb_rate(A, x, params.lambda0, false,
                                                   cfg.numerics.bound_cfg.y_tail_mass);
                        row.values[mth] = r.value;
                        row.tb_argmax = r.argmax_interval;
                        break;
                    }
                }
            } catch (const config_error&) {
                throw;  // config problems abort the whole run
            } catch (const std::exception& e) {
                if (!status.empty()) status += ";";
                status += method_name(mth) + ":" + classify(e) + ":" + e.what();
            }
        }
        row.status = status.empty() ? "ok" : status;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace jtac::cli
