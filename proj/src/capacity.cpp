#include "jtac/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jtac/errors.hpp"

namespace jtac::capacity {

std::vector<long> discrete_channel::output_symbol(std::size_t index) const {
    std::vector<long> counts(output_shape.size(), 0);
    for (size_t d = output_shape.size(); d-- > 0;) {
        counts[d] = static_cast<long>(index % static_cast<std::size_t>(output_shape[d]));
        index /= static_cast<std::size_t>(output_shape[d]);
    }
    return counts;
}

namespace {

constexpr size_t matrix_entry_cap = 80000000;  // hard memory guard on |X| * |Y|

// Smallest K with upper-tail mass <= tail for a Poisson of the given mean.
long poisson_quantile_cap(double mean, double tail) {
    if (mean <= 0.0) return 0;
    double cum = std::exp(-mean);
    double p = cum;
    long k = 0;
    while (cum < 1.0 - tail) {
        ++k;
        p = p * mean / k;
        cum += p;
        if (k > 100000000)
            throw convergence_error("poisson quantile: runaway", 1.0 - cum, (int)k);
    }
    return k;
}

std::vector<double> uniform_grid(double M, int count) {
    if (count < 2) throw config_error("discretize: need at least two grid points");
    std::vector<double> xs(count);
    for (int t = 0; t < count; ++t)
        xs[t] = M * static_cast<double>(t) / (count - 1);
    return xs;
}

} // namespace

discrete_channel discretize_jtac(const channel::arrival_matrix& A,
                                 const bounds::constraint_set& cons, int x_grid_size,
                                 double lambda0, double y_tail_mass, size_t output_cap) {
    cons.validate();
    if (lambda0 < 0.0) throw config_error("discretize_jtac: lambda0 must be nonnegative");
    if (y_tail_mass <= 0.0 || y_tail_mass >= 1.0)
        throw config_error("discretize_jtac: y_tail_mass must lie in (0, 1)");
    std::vector<double> xs = uniform_grid(cons.M, x_grid_size);

    // Per-bin count caps sized at the largest possible mean so every input row
    // drops at most y_tail_mass / n per coordinate.
    double per_coord_tail = y_tail_mass / A.n;
    std::vector<long> caps(A.n);
    size_t n_out = 1;
    for (int i = 1; i <= A.n; ++i) {
        double mean_max = cons.M * A.p_i_star[i - 1] + lambda0;
        caps[i - 1] = poisson_quantile_cap(mean_max, per_coord_tail);
        size_t width = static_cast<size_t>(caps[i - 1]) + 1;
        if (n_out > output_cap / width)
            throw size_error("discretize_jtac: output alphabet exceeds cap; lower n, M, "
                             "or the count truncation");
        n_out *= width;
    }
    size_t n_in = static_cast<size_t>(x_grid_size) * A.m;
    if (n_in > matrix_entry_cap / n_out)
        throw size_error("discretize_jtac: transition matrix would not fit in memory");

    discrete_channel ch;
    ch.output_shape.assign(caps.begin(), caps.end());
    for (auto& v : ch.output_shape) v += 1;
    ch.inputs.reserve(n_in);
    ch.input_costs.reserve(n_in);
    ch.W.assign(n_in * n_out, 0.0);
    ch.tail_mass_dropped.assign(n_in, 0.0);

    std::vector<std::vector<double>> coord_pmf(A.n);
    size_t row = 0;
    for (double x : xs) {
        for (int j = 0; j < A.m; ++j) {
            ch.inputs.emplace_back(x, j);
            ch.input_costs.push_back(x);
            double kept_all = 1.0;
            for (int i = 1; i <= A.n; ++i) {
                double mean = x * A.at(i, j) + lambda0;
                auto& pmf = coord_pmf[i - 1];
                pmf.assign(static_cast<size_t>(caps[i - 1]) + 1, 0.0);
                double p = std::exp(-mean);
                double kept = p;
                pmf[0] = p;
                for (long k = 1; k <= caps[i - 1]; ++k) {
                    p = p * mean / k;
                    pmf[k] = p;
                    kept += p;
                }
                kept_all *= kept;
                double inv = 1.0 / kept;  // renormalize so each row sums to one
                for (auto& v : pmf) v *= inv;
            }
            ch.tail_mass_dropped[row] = 1.0 - kept_all;
            double* W_row = &ch.W[row * n_out];
            W_row[0] = 1.0;
            size_t filled = 1;
            for (int i = 0; i < A.n; ++i) {
                const auto& pmf = coord_pmf[i];
                size_t width = pmf.size();
                for (size_t t = filled; t-- > 0;) {
                    double base = W_row[t];
                    double* dst = W_row + t * width;
                    for (size_t k = width; k-- > 0;) dst[k] = base * pmf[k];
                }
                filled *= width;
            }
            ++row;
        }
    }
    return ch;
}

discrete_channel discretize_cb(const channel::arrival_matrix& A,
                               const bounds::constraint_set& cons, int x_grid_size,
                               double lambda0, double y_tail_mass, size_t output_cap) {
    cons.validate();
    if (lambda0 < 0.0) throw config_error("discretize_cb: lambda0 must be nonnegative");
    if (y_tail_mass <= 0.0 || y_tail_mass >= 1.0)
        throw config_error("discretize_cb: y_tail_mass must lie in (0, 1)");
    std::vector<double> xs = uniform_grid(cons.M, x_grid_size);

    double mean_max = cons.M * A.p_prime_j[0] + A.n * lambda0;
    long cap = poisson_quantile_cap(mean_max, y_tail_mass);
    size_t n_out = static_cast<size_t>(cap) + 1;
    if (n_out > output_cap)
        throw size_error("discretize_cb: output alphabet exceeds cap");
    size_t n_in = xs.size();
    if (n_in > matrix_entry_cap / n_out)
        throw size_error("discretize_cb: transition matrix would not fit in memory");

    discrete_channel ch;
    ch.output_shape = {static_cast<long>(n_out)};
    ch.inputs.reserve(n_in);
    ch.input_costs.reserve(n_in);
    ch.W.assign(n_in * n_out, 0.0);
    ch.tail_mass_dropped.assign(n_in, 0.0);
    for (size_t row = 0; row < n_in; ++row) {
        double x = xs[row];
        ch.inputs.emplace_back(x, 0);
        ch.input_costs.push_back(x);
        double mean = x * A.p_prime_j[0] + A.n * lambda0;
        double* W_row = &ch.W[row * n_out];
        double p = std::exp(-mean);
        double kept = p;
        W_row[0] = p;
        for (long k = 1; k <= cap; ++k) {
            p = p * mean / k;
            W_row[k] = p;
            kept += p;
        }
        ch.tail_mass_dropped[row] = 1.0 - kept;
        double inv = 1.0 / kept;
        for (size_t k = 0; k < n_out; ++k) W_row[k] *= inv;
    }
    return ch;
}

namespace {

struct ba_state {
    std::vector<double> q;       // input law
    std::vector<double> qy;      // induced output law
    std::vector<double> d;       // per-input divergence D(W(.|x) || qy)
    double capacity = 0.0;
    double gap = 0.0;
    double mean_cost = 0.0;
    long iterations = 0;
};

// One full alternating-maximization run at fixed cost multiplier s,
// warm-started from q. Inputs whose mass decays below a floor are dropped
// from the iteration; on convergence the max-divergence certificate is
// re-evaluated over every input (also the dropped ones) and any input that
// still beats the bound is reactivated, so the returned gap is valid for
// the full alphabet.
ba_state ba_fixed_multiplier(const discrete_channel& ch, const std::vector<double>& rowH,
                             double s, std::vector<double> q, double tol, long max_iter) {
    constexpr double prune_floor = 1e-16;
    constexpr int max_certificate_rounds = 64;
    size_t nx = ch.num_inputs();
    size_t ny = ch.num_outputs();
    ba_state st;
    st.q = std::move(q);
    st.qy.assign(ny, 0.0);
    st.d.assign(nx, 0.0);
    std::vector<size_t> active;
    active.reserve(nx);
    for (size_t x = 0; x < nx; ++x)
        if (st.q[x] > 0.0) active.push_back(x);
    std::vector<double> ex(nx, 0.0);
    int certificate_rounds = 0;
    long next_certificate = 0;
    double last_gap = std::numeric_limits<double>::infinity();
    for (long it = 1; it <= max_iter; ++it) {
        std::fill(st.qy.begin(), st.qy.end(), 0.0);
        for (size_t x : active) {
            double w = st.q[x];
            const double* W_row = &ch.W[x * ny];
            for (size_t y = 0; y < ny; ++y) st.qy[y] += w * W_row[y];
        }
        // reuse qy as its own log; outputs unreachable from the active set
        // keep a sentinel handled in the certificate pass below
        for (size_t y = 0; y < ny; ++y)
            st.qy[y] = (st.qy[y] > 0.0) ? std::log(st.qy[y]) : 1.0;
        double ub = -std::numeric_limits<double>::infinity();
        double avg = 0.0;
        double cost = 0.0;
        double cap = 0.0;
        for (size_t x : active) {
            const double* W_row = &ch.W[x * ny];
            double cross = 0.0;
            for (size_t y = 0; y < ny; ++y)
                if (W_row[y] > 0.0) cross += W_row[y] * st.qy[y];
            st.d[x] = rowH[x] - cross;
            ex[x] = st.d[x] - s * ch.input_costs[x];
            ub = std::max(ub, ex[x]);
            avg += st.q[x] * ex[x];
            cost += st.q[x] * ch.input_costs[x];
            cap += st.q[x] * st.d[x];
        }
        st.iterations = it;
        st.mean_cost = cost;
        st.capacity = cap;
        st.gap = ub - avg;
        last_gap = st.gap;
        if (st.gap <= tol && it >= next_certificate) {
            // full certificate over every input, including pruned ones
            double full_ub = -std::numeric_limits<double>::infinity();
            for (size_t x = 0; x < nx; ++x) {
                const double* W_row = &ch.W[x * ny];
                double cross = 0.0;
                bool unreachable = false;
                for (size_t y = 0; y < ny; ++y) {
                    if (W_row[y] <= 0.0) continue;
                    if (st.qy[y] == 1.0) { unreachable = true; break; }
                    cross += W_row[y] * st.qy[y];
                }
                double e = unreachable ? 1e300
                                       : rowH[x] - cross - s * ch.input_costs[x];
                ex[x] = e;
                full_ub = std::max(full_ub, e);
            }
            st.gap = full_ub - avg;
            if (st.gap <= tol) return st;
            if (++certificate_rounds > max_certificate_rounds)
                throw convergence_error("blahut_arimoto: support kept reopening",
                                        st.gap, it);
            // revive every pruned input that still beats the bound, with
            // enough mass that it reaches equilibrium in a few steps, and
            // hold off the next full check so near-threshold inputs cannot
            // force a full scan per iteration
            bool revived = false;
            double revive_mass = std::max(prune_floor, 1.0 / static_cast<double>(nx));
            for (size_t x = 0; x < nx; ++x) {
                if (st.q[x] > 0.0 || ex[x] <= avg + tol) continue;
                st.q[x] = revive_mass;
                active.push_back(x);
                revived = true;
            }
            next_certificate = it + std::min<long>(2000, 50 + it / 4);
            if (revived) {
                std::sort(active.begin(), active.end());
                double z2 = 0.0;
                for (size_t x : active) z2 += st.q[x];
                double inv2 = 1.0 / z2;
                for (size_t x : active) st.q[x] *= inv2;
                continue;  // fold the new atoms into qy before the next update
            }
        }
        double z = 0.0;
        for (size_t x : active) {
            double v = st.q[x] * std::exp(ex[x] - ub);
            st.q[x] = v;
            z += v;
        }
        double inv = 1.0 / z;
        size_t keep = 0;
        bool pruned = false;
        for (size_t idx = 0; idx < active.size(); ++idx) {
            size_t x = active[idx];
            double v = st.q[x] * inv;
            if (v < prune_floor) {
                st.q[x] = 0.0;
                pruned = true;
            } else {
                st.q[x] = v;
                active[keep++] = x;
            }
        }
        if (pruned) {
            active.resize(keep);
            // renormalize the survivors
            double z2 = 0.0;
            for (size_t x : active) z2 += st.q[x];
            double inv2 = 1.0 / z2;
            for (size_t x : active) st.q[x] *= inv2;
        }
    }
    throw convergence_error("blahut_arimoto: iteration cap reached", last_gap, max_iter);
}

} // namespace

capacity_result blahut_arimoto(const discrete_channel& ch, std::optional<double> cost_cap,
                               double tol, long max_iter, int outer_iters, double tol_c) {
    size_t nx = ch.num_inputs();
    size_t ny = ch.num_outputs();
    if (nx == 0 || ny == 0) throw config_error("blahut_arimoto: empty channel");
    if (ch.W.size() != nx * ny) throw size_error("blahut_arimoto: matrix shape mismatch");
    if (tol <= 0.0) throw config_error("blahut_arimoto: tol must be positive");

    std::vector<double> rowH(nx, 0.0);
    for (size_t x = 0; x < nx; ++x) {
        const double* W_row = &ch.W[x * ny];
        double acc = 0.0;
        for (size_t y = 0; y < ny; ++y)
            if (W_row[y] > 0.0) acc += W_row[y] * std::log(W_row[y]);
        rowH[x] = acc;
    }

    std::vector<double> q0(nx, 1.0 / nx);
    long total_iters = 0;

    auto pack = [&](const ba_state& st, double s) {
        capacity_result out;
        out.capacity = rate{st.capacity};
        out.input_distribution = st.q;
        out.iterations = total_iters;
        out.gap = st.gap;
        out.multiplier = s;
        out.achieved_mean_cost = st.mean_cost;
        return out;
    };

    ba_state st = ba_fixed_multiplier(ch, rowH, 0.0, q0, tol, max_iter);
    total_iters += st.iterations;
    if (!cost_cap || st.mean_cost <= *cost_cap * (1.0 + 1e-12))
        return pack(st, 0.0);

    double cap = *cost_cap;
    if (cap <= 0.0) throw config_error("blahut_arimoto: cost cap must be positive");
    double tc = (tol_c > 0.0) ? tol_c : 1e-4 * cap;
    double loose = 10.0 * tol;

    // Grow an upper multiplier until the mean cost drops below the cap; the
    // input law is warm-started across evaluations throughout.
    double s_lo = 0.0;
    double s_hi = 0.5;
    std::vector<double> q_warm = st.q;
    ba_state st_hi;
    for (int grow = 0;; ++grow) {
        if (grow > 60)
            throw convergence_error("blahut_arimoto: cost multiplier bracket runaway",
                                    st.mean_cost - cap, total_iters);
        st_hi = ba_fixed_multiplier(ch, rowH, s_hi, q_warm, loose, max_iter);
        total_iters += st_hi.iterations;
        q_warm = st_hi.q;
        if (st_hi.mean_cost <= cap) break;
        s_lo = s_hi;
        s_hi *= 2.0;
    }

    double s_feasible = s_hi;
    ba_state st_feasible = st_hi;
    ba_state st_over = st;  // the s = 0 run sits above the cap here
    double s_over = 0.0;
    for (int it = 0; it < outer_iters; ++it) {
        if (cap - st_feasible.mean_cost <= tc && st_feasible.mean_cost <= cap) break;
        double s_mid = 0.5 * (s_lo + s_hi);
        ba_state st_mid = ba_fixed_multiplier(ch, rowH, s_mid, q_warm, loose, max_iter);
        total_iters += st_mid.iterations;
        q_warm = st_mid.q;
        if (st_mid.mean_cost <= cap) {
            s_hi = s_mid;
            s_feasible = s_mid;
            st_feasible = st_mid;
        } else {
            s_lo = s_mid;
            s_over = s_mid;
            st_over = st_mid;
        }
    }

    // Full-accuracy phase. The loose runs can misjudge which side of the cost
    // jump a multiplier sits on, so reclassify the bracket edges at the final
    // tolerance; s = 0 is a known infeasible anchor (the unconstrained
    // optimum violates the cap).
    double s_u = s_feasible;
    ba_state st_u = ba_fixed_multiplier(ch, rowH, s_u, st_feasible.q, tol, max_iter);
    total_iters += st_u.iterations;
    for (int grow = 0; st_u.mean_cost > cap; ++grow) {
        if (grow > 60)
            throw convergence_error("blahut_arimoto: no feasible cost at any multiplier",
                                    st_u.mean_cost - cap, total_iters);
        s_over = s_u;
        st_over = st_u;
        s_u = (s_u > 0.0) ? 2.0 * s_u : 1e-6;
        st_u = ba_fixed_multiplier(ch, rowH, s_u, st_u.q, tol, max_iter);
        total_iters += st_u.iterations;
    }
    if (cap - st_u.mean_cost <= tc) return pack(st_u, s_u);

    double s_o = 0.0;
    ba_state st_o = st;
    if (s_over > 0.0 && s_over < s_u) {
        ba_state probe = ba_fixed_multiplier(ch, rowH, s_over, st_over.q, tol,
                                             max_iter);
        total_iters += probe.iterations;
        if (probe.mean_cost > cap) {
            s_o = s_over;
            st_o = std::move(probe);
        } else if (cap - probe.mean_cost <= tc) {
            return pack(probe, s_over);
        } else {
            s_u = s_over;
            st_u = std::move(probe);
        }
    }

    // On a finite alphabet the optimal rate-cost tradeoff is piecewise
    // linear, so at a critical multiplier the mean cost jumps and bisection
    // alone may never land inside the window. Narrow the bracket until the
    // feasible endpoint either lands in the window or sits close enough to
    // the jump that blending across it fits the convergence budget.
    for (int round = 0; round < 16; ++round) {
        if ((s_u - s_o) * (cap - st_u.mean_cost) <= tol / 3.0) break;
        double s_mid = 0.5 * (s_o + s_u);
        ba_state st_mid = ba_fixed_multiplier(ch, rowH, s_mid, st_u.q, tol, max_iter);
        total_iters += st_mid.iterations;
        if (st_mid.mean_cost <= cap) {
            if (cap - st_mid.mean_cost <= tc) return pack(st_mid, s_mid);
            s_u = s_mid;
            st_u = std::move(st_mid);
        } else {
            s_o = s_mid;
            st_o = std::move(st_mid);
        }
    }

    // Polish both endpoints in place (same multiplier, warm-started, so only
    // the marginal iterations are spent) to a third of the budget each; the
    // blended certificate below then stays within the overall tolerance.
    double tol_end = tol / 3.0;
    {
        ba_state p_u = ba_fixed_multiplier(ch, rowH, s_u, st_u.q, tol_end, max_iter);
        total_iters += p_u.iterations;
        ba_state p_o = ba_fixed_multiplier(ch, rowH, s_o, st_o.q, tol_end, max_iter);
        total_iters += p_o.iterations;
        if (p_u.mean_cost > cap || p_o.mean_cost <= cap) {
            // an endpoint crossed the cap while polishing
            if (p_u.mean_cost > cap && p_o.mean_cost <= cap) {
                std::swap(p_u, p_o);
                std::swap(s_u, s_o);
            } else if (p_u.mean_cost > cap) {
                throw convergence_error("blahut_arimoto: cost bracket collapsed",
                                        p_u.mean_cost - cap, total_iters);
            } else {
                // both feasible: keep the better rate, report the certified
                // distance to the capped optimum instead of blending
                if (p_o.capacity > p_u.capacity) {
                    std::swap(p_u, p_o);
                    std::swap(s_u, s_o);
                }
                capacity_result out = pack(p_u, s_u);
                out.gap = p_u.gap + s_u * (cap - p_u.mean_cost);
                return out;
            }
        }
        st_u = std::move(p_u);
        st_o = std::move(p_o);
    }
    if (cap - st_u.mean_cost <= tc) return pack(st_u, s_u);

    // Blend the two endpoint laws: cost is linear in the input law and the
    // tradeoff curve is linear across the jump, so the blend sits on it up to
    // the endpoint convergence gaps (folded into the reported gap).
    double lambda = (cap - st_u.mean_cost) / (st_o.mean_cost - st_u.mean_cost);
    lambda *= 1.0 - 1e-12;  // keep the blended cost strictly at or below cap
    std::vector<double> q_mix(nx);
    for (size_t x = 0; x < nx; ++x)
        q_mix[x] = (1.0 - lambda) * st_u.q[x] + lambda * st_o.q[x];

    capacity_result out;
    out.capacity = mutual_information(ch, q_mix);
    out.input_distribution = std::move(q_mix);
    out.iterations = total_iters;
    // One-sided certificate from the feasible-side run: the capped optimum is
    // at most I_u + s_u (cap - E_u) plus that run's own convergence gap.
    out.gap = std::max(0.0, st_u.capacity + s_u * (cap - st_u.mean_cost) +
                                st_u.gap - out.capacity.nats);
    out.multiplier = s_u;
    out.achieved_mean_cost = 0.0;
    for (size_t x = 0; x < nx; ++x)
        out.achieved_mean_cost += out.input_distribution[x] * ch.input_costs[x];
    return out;
}

rate mutual_information(const discrete_channel& ch, const std::vector<double>& input_dist) {
    size_t nx = ch.num_inputs();
    size_t ny = ch.num_outputs();
    if (input_dist.size() != nx)
        throw size_error("mutual_information: distribution length mismatch");
    double total = 0.0;
    for (double v : input_dist) {
        if (v < -1e-15) throw numeric_error("mutual_information: negative probability");
        total += v;
    }
    if (std::fabs(total - 1.0) > 1e-6)
        throw numeric_error("mutual_information: distribution does not sum to one");

    std::vector<double> qy(ny, 0.0);
    for (size_t x = 0; x < nx; ++x) {
        double w = input_dist[x];
        if (w <= 0.0) continue;
        const double* W_row = &ch.W[x * ny];
        for (size_t y = 0; y < ny; ++y) qy[y] += w * W_row[y];
    }
    double info = 0.0;
    for (size_t x = 0; x < nx; ++x) {
        double w = input_dist[x];
        if (w <= 0.0) continue;
        const double* W_row = &ch.W[x * ny];
        double acc = 0.0;
        for (size_t y = 0; y < ny; ++y)
            if (W_row[y] > 0.0) acc += W_row[y] * std::log(W_row[y] / qy[y]);
        info += w * acc;
    }
    return rate{info};
}

tb_result tb_rate(const channel::arrival_matrix& A, double x_fixed, double lambda0,
                  bool optimize_timing_law, double y_tail_mass) {
    if (x_fixed <= 0.0) throw numeric_error("tb_rate: x_fixed must be positive");
    if (lambda0 < 0.0) throw config_error("tb_rate: lambda0 must be nonnegative");
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 1;
    for (int i = 1; i <= A.n; ++i) {
        double mean_max = 0.0;
        for (int j = 0; j < A.m; ++j)
            mean_max = std::max(mean_max, x_fixed * A.at(i, j) + lambda0);
        long cap = poisson_quantile_cap(mean_max, y_tail_mass);
        size_t n_out = static_cast<size_t>(cap) + 1;

        discrete_channel ch;
        ch.output_shape = {static_cast<long>(n_out)};
        ch.W.assign(static_cast<size_t>(A.m) * n_out, 0.0);
        ch.tail_mass_dropped.assign(A.m, 0.0);
        for (int j = 0; j < A.m; ++j) {
            ch.inputs.emplace_back(x_fixed, j);
            ch.input_costs.push_back(x_fixed);
            double mean = x_fixed * A.at(i, j) + lambda0;
            double* W_row = &ch.W[static_cast<size_t>(j) * n_out];
            double p = std::exp(-mean);
            double kept = p;
            W_row[0] = p;
            for (long k = 1; k <= cap; ++k) {
                p = p * mean / k;
                W_row[k] = p;
                kept += p;
            }
            ch.tail_mass_dropped[j] = 1.0 - kept;
            double inv = 1.0 / kept;
            for (size_t k = 0; k < n_out; ++k) W_row[k] *= inv;
        }
        double v;
        if (optimize_timing_law) {
            v = blahut_arimoto(ch, std::nullopt, 1e-9, 200000).capacity.nats;
        } else {
            std::vector<double> unif(A.m, 1.0 / A.m);
            v = mutual_information(ch, unif).nats;
        }
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    return {rate{best}, best_i};
}

} // namespace jtac::capacity
