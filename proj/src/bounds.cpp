#include "jtac/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "jtac/errors.hpp"
#include "jtac/specfun.hpp"

namespace jtac::bounds {

namespace {

constexpr double ln_2pi_e = 2.837877066409345483560659472811;  // ln(2*pi*e)
constexpr double sqrt_pi = 1.772453850905516027298167483341;

struct root_result {
    double x = 0.0;
    int evals = 0;
};

// Brent's method on [a, b]; requires a sign change. fa/fb are f(a), f(b).
root_result brent(const std::function<double(double)>& f, double a, double b,
                  double fa, double fb, double xtol) {
    if (fa == 0.0) return {a, 0};
    if (fb == 0.0) return {b, 0};
    if ((fa > 0.0) == (fb > 0.0))
        throw numeric_error("root solve: bracket does not straddle a sign change");
    int evals = 0;
    double c = a, fc = fa, d = b - a, e = d;
    for (int iter = 0; iter < 200; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                      0.5 * xtol;
        double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return {b, evals};
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        ++evals;
    }
    throw convergence_error("root solve: iteration cap reached", std::fabs(fb), 200);
}

double entropy_arg_check(const channel::arrival_matrix& A) {
    if (A.n < 1 || A.m < 1) throw config_error("bounds: empty arrival matrix");
    return 0.0;
}

// 2K+1 point centered stencil weights for the k-th derivative at 0 with
// spacing h (Fornberg's recursion).
std::vector<long double> fd_weights(int k, int K, long double h) {
    int N = 2 * K;  // node count - 1
    std::vector<long double> grid(N + 1);
    for (int i = 0; i <= N; ++i) grid[i] = (i - K) * h;
    std::vector<std::vector<long double>> C(N + 1, std::vector<long double>(k + 1, 0.0L));
    C[0][0] = 1.0L;
    long double c1 = 1.0L;
    long double c4 = grid[0];
    for (int i = 1; i <= N; ++i) {
        int mn = std::min(i, k);
        long double c2 = 1.0L;
        long double c5 = c4;
        c4 = grid[i];
        for (int j = 0; j < i; ++j) {
            long double c3 = grid[i] - grid[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int kk = mn; kk >= 1; --kk)
                    C[i][kk] = c1 * (kk * C[i - 1][kk - 1] - c5 * C[i - 1][kk]) / c2;
                C[i][0] = -c1 * c5 * C[i - 1][0] / c2;
            }
            for (int kk = mn; kk >= 1; --kk)
                C[j][kk] = (c4 * C[j][kk] - kk * C[j][kk - 1]) / c3;
            C[j][0] = c4 * C[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<long double> w(N + 1);
    for (int i = 0; i <= N; ++i) w[i] = C[i][k];
    return w;
}

} // namespace

void constraint_set::validate() const {
    if (M <= 0.0) throw config_error("constraints: M must be positive");
    if (E_m <= 0.0) throw config_error("constraints: E_m must be positive");
    if (E_m > M) throw config_error("constraints: E_m must not exceed M");
}

double solve_mu(double alpha, double tol) {
    if (!(alpha > 0.0) || !(alpha < 1.0 / 3.0))
        throw infeasible_error(
            "solve_mu: mean-to-peak ratio must lie in (0, 1/3); the tilt equation "
            "has no positive root otherwise");
    auto rhs = [](double mu) {
        return 1.0 / (2.0 * mu) -
               std::exp(-mu) / (std::sqrt(mu * std::numbers::pi) * std::erf(std::sqrt(mu)));
    };
    auto g = [&](double mu) { return rhs(mu) - alpha; };
    double lo = 1e-10;
    double hi = std::max(1.0, 0.6 / alpha);
    double glo = g(lo);
    double ghi = g(hi);
    int grow = 0;
    while (ghi > 0.0 && grow++ < 80) {
        hi *= 2.0;
        ghi = g(hi);
    }
    if (glo < 0.0 || ghi > 0.0)
        throw convergence_error("solve_mu: failed to bracket the root", std::fabs(ghi), grow);
    root_result r = brent(g, lo, hi, glo, ghi, 1e-15);
    if (std::fabs(g(r.x)) > tol)
        throw convergence_error("solve_mu: residual above tolerance", std::fabs(g(r.x)),
                                r.evals);
    return r.x;
}

double explog_correction(double p_star_i, double M, double mu) {
    if (p_star_i <= 0.0)
        throw numeric_error("explog_correction: arrival probability must be positive");
    if (M <= 0.0 || mu <= 0.0)
        throw numeric_error("explog_correction: M and mu must be positive");
    double a = 12.0 * p_star_i * M;
    return (4.0 * std::sqrt(mu / a) * std::atan(std::sqrt(a)) +
            2.0 * std::sqrt(mu) * std::log1p(1.0 / a)) /
           (sqrt_pi * std::erf(std::sqrt(mu)));
}

lb1_result lower_bound_1(const channel::arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg) {
    entropy_arg_check(A);
    cons.validate();
    double alpha = cons.E_m / cons.M;
    double mu = solve_mu(alpha, cfg.root_tol);
    double eta = cfg.resolved_eta(cons);
    double M = cons.M;
    double m = A.m;

    double common = std::log(static_cast<double>(A.m)) + 0.5 * std::log(M / mu) +
                    std::log(sqrt_pi * std::erf(std::sqrt(mu))) + alpha * mu - m -
                    0.5 * ln_2pi_e;

    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    double best_k = 0.0;
    for (int i = 1; i <= A.n; ++i) {
        if (A.p_tilde_i[i - 1] <= 0.0) continue;  // a zero column makes k collapse
        double inv_sum = 0.0;
        for (int j = 0; j < A.m; ++j) inv_sum += 1.0 / A.at(i, j);
        double k = 1.0 / inv_sum;
        double ps = A.p_i_star[i - 1];
        double r = common - std::log(eta * ps) - std::log(k) - 0.5 * std::log(ps) -
                   0.5 * explog_correction(ps, M, mu);
        if (!found || r > best) {
            found = true;
            best = r;
            best_i = i;
            best_k = k;
        }
    }
    if (!found)
        throw infeasible_error(
            "lower_bound_1: every bin has a release with zero arrival probability");
    return {rate{best}, best_i, mu, best_k};
}

phi_solution solve_phi(const constraint_set& cons, double p_star, double tol) {
    cons.validate();
    if (p_star <= 0.0) throw numeric_error("solve_phi: p_star must be positive");
    double b = 12.0 * p_star;
    double M = cons.M;
    if (cons.E_m <= 1.0 / b)
        throw infeasible_error(
            "solve_phi: mean constraint at or below 1/(12 p_star); the tilted "
            "density cannot reach that mean");

    double L = std::log1p(b * M);
    double I0_0 = L / b;
    double I1_0 = (M - I0_0) / b;
    double I2_0 = (b * b * M * M / 2.0 - b * M + L) / (b * b * b);

    auto moments = [&](double phi, double& I0, double& I1) {
        if (std::fabs(phi) * (M + 1.0 / b) < 1e-8) {
            // first-order expansion around phi = 0 keeps the map smooth there
            I0 = I0_0 + phi * I1_0;
            I1 = I1_0 + phi * I2_0;
            return;
        }
        double zl = phi / b;
        double zh = phi * (M + 1.0 / b);
        if (zh > 600.0 || zl < -600.0)
            throw numeric_error("solve_phi: tilt exponent out of safe range");
        I0 = std::exp(-zl) * (specfun::expint_ei(zh) - specfun::expint_ei(zl)) / b;
        I1 = std::expm1(phi * M) / (b * phi) - I0 / b;
    };
    auto mean_at = [&](double phi) {
        double I0, I1;
        moments(phi, I0, I1);
        return I1 / I0;
    };

    double w = 1.0 / (M + 1.0 / b);
    double lo = -w, hi = w;
    double flo = mean_at(lo) - cons.E_m;
    double fhi = mean_at(hi) - cons.E_m;
    int grow = 0;
    while (flo > 0.0 && grow++ < 200) {
        lo *= 2.0;
        flo = mean_at(lo) - cons.E_m;
    }
    while (fhi < 0.0 && grow++ < 200) {
        hi *= 2.0;
        fhi = mean_at(hi) - cons.E_m;
    }
    if (flo > 0.0 || fhi < 0.0)
        throw convergence_error("solve_phi: failed to bracket the tilt", 0.0, grow);

    auto g = [&](double phi) { return mean_at(phi) - cons.E_m; };
    root_result r = brent(g, lo, hi, flo, fhi, 1e-15 * (1.0 + std::fabs(hi)));
    double I0, I1;
    moments(r.x, I0, I1);
    phi_solution out;
    out.phi = r.x;
    out.c_prime = 1.0 / I0;
    out.residual = std::fabs(I1 / I0 - cons.E_m);
    out.iterations = r.evals + grow + 2;
    if (out.residual > std::max(tol, 1e-9 * cons.E_m))
        throw convergence_error("solve_phi: residual above tolerance", out.residual,
                                out.iterations);
    return out;
}

lb2_result lower_bound_2(const channel::arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg) {
    entropy_arg_check(A);
    cons.validate();
    for (int j = 0; j < A.m; ++j)
        if (A.p_prime_j[j] <= 0.0)
            throw infeasible_error("lower_bound_2: a release has zero total arrival mass");
    double eta = cfg.resolved_eta(cons);
    double inv_sum = 0.0;
    for (int j = 0; j < A.m; ++j) inv_sum += 1.0 / A.p_prime_j[j];
    double k_prime = 1.0 / inv_sum;

    phi_solution phi = solve_phi(cons, A.p_star, cfg.root_tol);

    double h_best = -std::numeric_limits<double>::infinity();
    int best_i = 1;
    for (int i = 1; i <= A.n; ++i) {
        double h = specfun::poisson_entropy(cons.M * A.p_tilde_i[i - 1]);
        if (h > h_best) {
            h_best = h;
            best_i = i;
        }
    }

    double shared = -std::log(phi.c_prime) - eta * phi.phi - std::log(eta * A.p_star) -
                    ln_2pi_e - std::log(k_prime) + std::log(12.0) + h_best;
    lb2_result out;
    out.r1 = rate{shared - 1.0};
    out.r2 = rate{shared + std::log(static_cast<double>(A.m)) - A.m};
    out.best = rate{std::max(out.r1.nats, out.r2.nats)};
    out.phi = phi.phi;
    out.c_prime = phi.c_prime;
    out.argmax_interval = best_i;
    return out;
}

timing_rate_result timing_rate_given_x(const channel::arrival_matrix& A, double x) {
    entropy_arg_check(A);
    if (x <= 0.0) throw numeric_error("timing_rate_given_x: x must be positive");
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 1;
    for (int i = 1; i <= A.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < A.m; ++j)
            acc += specfun::poisson_entropy(A.at(i, j) * x);
        double v = std::log(static_cast<double>(A.m)) + acc / A.m -
                   std::log(A.p_i_star[i - 1] * x + 1.0 / 12.0);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    return {rate{best}, best_i};
}

double mixture_entropy_lower(const std::vector<mixture_component>& components, double y0,
                             int r) {
    if (components.empty())
        throw numeric_error("mixture_entropy_lower: no components");
    if (r < 0 || r > 16 || r % 2 != 0)
        throw numeric_error("mixture_entropy_lower: order must be even and in [0, 16]");
    double wsum = 0.0;
    double min_sd = std::numeric_limits<double>::infinity();
    for (const auto& cpt : components) {
        if (cpt.weight <= 0.0)
            throw numeric_error("mixture_entropy_lower: weights must be positive");
        if (cpt.variance <= 0.0)
            throw numeric_error("mixture_entropy_lower: variances must be positive");
        wsum += cpt.weight;
        min_sd = std::min(min_sd, std::sqrt(cpt.variance));
    }
    if (std::fabs(wsum - 1.0) > 1e-9)
        throw numeric_error("mixture_entropy_lower: weights must sum to one");

    auto log_g = [&](long double t) {
        long double mx = -std::numeric_limits<long double>::infinity();
        std::vector<long double> le(components.size());
        for (size_t j = 0; j < components.size(); ++j) {
            const auto& cpt = components[j];
            long double d = t - static_cast<long double>(cpt.mean);
            le[j] = std::log(static_cast<long double>(cpt.weight)) -
                    d * d / (2.0L * cpt.variance) -
                    0.5L * std::log(2.0L * std::numbers::pi_v<long double> * cpt.variance);
            mx = std::max(mx, le[j]);
        }
        long double s = 0.0L;
        for (long double v : le) s += std::exp(v - mx);
        return mx + std::log(s);
    };

    // Taylor coefficients z_k of ln g about y0 via centered differences with
    // step-halving extrapolation.
    std::vector<double> z(r + 1, 0.0);
    z[0] = static_cast<double>(log_g(y0));
    std::vector<long double> kfact(r + 1, 1.0L);
    for (int k = 1; k <= r; ++k) kfact[k] = kfact[k - 1] * k;
    for (int k = 1; k <= r; ++k) {
        int K = k / 2 + 4;
        int q = 2 * K - k + ((k % 2 == 0) ? 2 : 1);
        long double h = static_cast<long double>(min_sd) *
                        std::pow(1e-19L, 1.0L / (k + q));
        auto deriv = [&](long double step) {
            std::vector<long double> w = fd_weights(k, K, step);
            long double acc = 0.0L;
            for (int idx = -K; idx <= K; ++idx)
                acc += w[idx + K] * log_g(static_cast<long double>(y0) + idx * step);
            return acc;
        };
        long double dh = deriv(h);
        long double dh2 = deriv(h / 2.0L);
        long double pw = std::pow(2.0L, static_cast<long double>(q));
        long double d = (pw * dh2 - dh) / (pw - 1.0L);
        long double zk = d / kfact[k];
        if (!std::isfinite(static_cast<double>(zk)) || std::fabs(static_cast<double>(zk)) > 1e12)
            throw numeric_error(
                "mixture_entropy_lower: series coefficient blew up; reduce the order r");
        z[k] = static_cast<double>(zk);
    }

    double total = 0.0;
    for (int k = 0; k <= r; ++k) {
        double moment_mix = 0.0;
        for (const auto& cpt : components)
            moment_mix += cpt.weight *
                          specfun::gaussian_noncentral_moment(k, cpt.mean - y0, cpt.variance);
        double term = z[k] * moment_mix;
        if (!std::isfinite(term) || std::fabs(term) > 1e12)
            throw numeric_error(
                "mixture_entropy_lower: expansion term blew up; reduce the order r");
        total -= term;
    }
    return total;
}

namespace {

double solve_u(const constraint_set& cons) {
    double M = cons.M;
    if (cons.E_m >= 0.5 * M)
        throw infeasible_error(
            "lower_bound_3: mean-to-peak ratio must be below 1/2 for the "
            "truncated-Gaussian tilt");
    auto mean_at = [&](double lu) {
        double u = std::exp(lu);
        double su = std::sqrt(u);
        return su * (-std::expm1(-M * M / u)) / (sqrt_pi * std::erf(M / su));
    };
    auto g = [&](double lu) { return mean_at(lu) - cons.E_m; };
    double lo = -60.0, hi = 80.0;
    double glo = g(lo), ghi = g(hi);
    if (glo > 0.0 || ghi < 0.0)
        throw infeasible_error("lower_bound_3: no tilt width matches the mean constraint");
    root_result r = brent(g, lo, hi, glo, ghi, 1e-14);
    return std::exp(r.x);
}

} // namespace

lb3_result lower_bound_3(const channel::arrival_matrix& A, const constraint_set& cons,
                         const bound_config& cfg) {
    entropy_arg_check(A);
    cons.validate();
    if (A.n < 2)
        throw infeasible_error("lower_bound_3: needs at least two bins (pairwise differences)");
    for (int j = 0; j < A.m; ++j)
        if (A.p_prime_j[j] <= 0.0)
            throw infeasible_error("lower_bound_3: a release has zero total arrival mass");

    double eta = cfg.resolved_eta(cons);
    double M = cons.M;
    double m = A.m;
    double u = solve_u(cons);
    double su = std::sqrt(u);

    double inv_sum = 0.0, log_pp_sum = 0.0;
    for (int j = 0; j < A.m; ++j) {
        inv_sum += 1.0 / A.p_prime_j[j];
        log_pp_sum += std::log(A.p_prime_j[j]);
    }
    double k_prime = 1.0 / inv_sum;

    double pf_first = (cfg.paper_literal ? 0.5 : 0.25) / m;
    double common = pf_first * std::log(M) * std::erf(M / su) -
                    M * specfun::hyp2f2_half(-M * M / u) / (2.0 * m * sqrt_pi * su) +
                    0.5 * std::log(2.0 * std::numbers::pi * u * std::numbers::e) -
                    std::log(eta * A.p_star) - m - std::log(k_prime) -
                    log_pp_sum / (2.0 * m);

    bool found = false;
    double best = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 2; i <= A.n; ++i) {
        bool ok = true;
        for (int j = 0; j < A.m; ++j)
            if (A.q_prime_at(i, j) <= 0.0) { ok = false; break; }
        if (!ok) continue;

        std::vector<mixture_component> comps(A.m);
        double log_qp_sum = 0.0;
        for (int j = 0; j < A.m; ++j) {
            comps[j].weight = 1.0 / m;
            comps[j].mean = eta * A.q_at(i, j);
            comps[j].variance = eta * A.q_prime_at(i, j);
            log_qp_sum += 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e *
                                          A.q_prime_at(i, j));
        }
        double y0 = eta * A.q_at(i, 0);
        double mix = mixture_entropy_lower(comps, y0, cfg.taylor_order_r);
        double v = common + mix + log_qp_sum / (2.0 * m);
        if (!found || v > best) {
            found = true;
            best = v;
            best_i = i;
        }
    }
    if (!found)
        throw numeric_error(
            "lower_bound_3: every bin pair has a release with degenerate difference "
            "variance");
    return {rate{best}, best_i, u};
}

double sym_kl_interval_bound(const channel::arrival_matrix& A, int i,
                             const constraint_set& cons, double lambda0) {
    entropy_arg_check(A);
    cons.validate();
    if (i < 1 || i > A.n) throw config_error("sym_kl_interval_bound: bin index out of range");
    if (lambda0 <= 0.0)
        throw numeric_error(
            "sym_kl_interval_bound: needs background arrivals (lambda0 > 0), the "
            "divergence is unbounded otherwise");
    if (cons.E_m > 0.5 * cons.M)
        throw infeasible_error("sym_kl_interval_bound: requires E_m <= M / 2");
    double p = A.p_i_star[i - 1];
    return (cons.E_m * p / cons.M) * (cons.M - cons.E_m) *
           std::log(cons.M * p / lambda0 + 1.0);
}

rate upper_bound(const channel::arrival_matrix& A, const constraint_set& cons,
                 double lambda0) {
    double total = 0.0;
    for (int i = 1; i <= A.n; ++i)
        total += sym_kl_interval_bound(A, i, cons, lambda0);
    return rate{total};
}

} // namespace jtac::bounds
