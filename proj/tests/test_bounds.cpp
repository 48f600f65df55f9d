#include "doctest.h"

#include <cmath>
#include <vector>

#include "jtac/bounds.hpp"
#include "jtac/channel.hpp"
#include "jtac/errors.hpp"
#include "jtac/specfun.hpp"

#include "support/oracles.hpp"
#include "support/quadrature.hpp"

using namespace jtac;
using namespace jtac_test;

namespace {

struct scenario {
    channel::channel_params params;
    bounds::constraint_set cons;
};

// three structurally different operating points: mid dispersion, fast
// diffusion with more bins, slow diffusion with few wide bins
std::vector<scenario> scenarios() {
    std::vector<scenario> out;
    {
        channel::channel_params p;
        p.c = 2.0; p.T_s = 4.0; p.n = 3; p.t_b = 4.0 / 3.0;
        p.m = 10; p.tau_x = 2.0; p.sigma_x = 2.0 / 9.0; p.lambda0 = 0.1;
        out.push_back({p, {2.0, 10.0}});
    }
    {
        channel::channel_params p;
        p.c = 0.1; p.T_s = 4.0; p.n = 4; p.t_b = 1.0;
        p.m = 5; p.tau_x = 2.0; p.sigma_x = 0.5; p.lambda0 = 0.05;
        out.push_back({p, {4.0, 20.0}});
    }
    {
        channel::channel_params p;
        p.c = 5.0; p.T_s = 10.0; p.n = 2; p.t_b = 5.0;
        p.m = 3; p.tau_x = 3.0; p.sigma_x = 1.5; p.lambda0 = 1.0;
        out.push_back({p, {3.0, 15.0}});
    }
    return out;
}

// right side of the mean-parameter equation solved by solve_mu
double mu_equation_rhs(double mu) {
    return 1.0 / (2.0 * mu) -
           std::exp(-mu) / (std::sqrt(mu * M_PI) * specfun::erf(std::sqrt(mu)));
}

} // namespace

TEST_CASE("solve_mu satisfies its defining equation") {
    for (double alpha : {0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.33}) {
        CAPTURE(alpha);
        double mu = bounds::solve_mu(alpha);
        CHECK(std::abs(mu_equation_rhs(mu) - alpha) < 1e-9);
    }
    // independent bisection at alpha = 0.2
    double lo = 1e-6, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        // rhs decreases in mu
        (mu_equation_rhs(mid) > 0.2 ? lo : hi) = mid;
    }
    CHECK(std::abs(bounds::solve_mu(0.2) - 0.5 * (lo + hi)) < 1e-8);
    CHECK(std::abs(bounds::solve_mu(0.2) - 1.8742066309) < 1e-8);
}

TEST_CASE("solve_mu is infeasible at and beyond the small-mu limit") {
    // the right side never exceeds 1/3, so these mean-to-peak ratios have
    // no matching density in this family
    for (double alpha : {1.0 / 3.0, 0.35, 0.40, 0.45, 0.6}) {
        CAPTURE(alpha);
        CHECK_THROWS_AS(bounds::solve_mu(alpha), infeasible_error);
    }
    CHECK_THROWS_AS(bounds::solve_mu(0.0), infeasible_error);
    CHECK_THROWS_AS(bounds::solve_mu(-0.1), infeasible_error);
}

TEST_CASE("explog_correction equals the dropped-exponential integral") {
    for (double p : {0.05, 0.3, 0.9}) {
        for (double M : {5.0, 20.0}) {
            for (double mu : {0.5, 1.8742066309, 6.0}) {
                CAPTURE(p);
                CAPTURE(M);
                CAPTURE(mu);
                // integral of sqrt(mu/(M pi x)) ln(1 + 1/(12 p x)) dx / erf(sqrt mu)
                // via x = M s^2
                double quad = integrate(
                    [&](double s) {
                        return 2.0 * std::sqrt(mu / M_PI) *
                               std::log1p(1.0 / (12.0 * p * M * s * s));
                    },
                    1e-14, 1.0, 1e-12);
                quad /= specfun::erf(std::sqrt(mu));
                double got = bounds::explog_correction(p, M, mu);
                CHECK(std::abs(got - quad) < 1e-7);
                // dropping exp(-mu x / M) from the density can only enlarge it
                double exact = integrate(
                    [&](double s) {
                        return 2.0 * std::sqrt(mu / M_PI) * std::exp(-mu * s * s) *
                               std::log1p(1.0 / (12.0 * p * M * s * s));
                    },
                    1e-14, 1.0, 1e-12) / specfun::erf(std::sqrt(mu));
                CHECK(got >= exact - 1e-10);
            }
        }
    }
}

TEST_CASE("solve_phi produces a normalized density with the requested mean") {
    struct tilt_case { double E_m, M, p_star; };
    for (auto tc : {tilt_case{2.0, 10.0, 0.4795},
                    tilt_case{9.0, 10.0, 0.9},
                    tilt_case{0.5, 40.0, 0.6},
                    tilt_case{5.0, 10.0, 0.05}}) {
        CAPTURE(tc.E_m);
        CAPTURE(tc.M);
        CAPTURE(tc.p_star);
        bounds::constraint_set cons{tc.E_m, tc.M};
        auto sol = bounds::solve_phi(cons, tc.p_star);
        double b = 12.0 * tc.p_star;
        auto dens = [&](double x) {
            return sol.c_prime * std::exp(sol.phi * x) / (b * x + 1.0);
        };
        double mass = integrate(dens, 0.0, tc.M, 1e-12);
        double mean = integrate([&](double x) { return x * dens(x); }, 0.0, tc.M, 1e-12);
        CHECK(std::abs(mass - 1.0) < 1e-8);
        CHECK(std::abs(mean - tc.E_m) < 1e-6 * std::max(1.0, tc.E_m));
    }
    // mean at or below 1/(12 p*) cannot be reached by this tilt family
    bounds::constraint_set tiny{0.002, 10.0};
    CHECK_THROWS_AS(bounds::solve_phi(tiny, 30.0), infeasible_error);
}

TEST_CASE("single-bin rate matches its quadrature re-assembly") {
    for (const auto& sc : scenarios()) {
        auto A = channel::make_arrival_matrix(sc.params);
        auto got = bounds::lower_bound_1(A, sc.cons);
        double best = -1e300;
        for (int i = 1; i <= A.n; ++i) {
            if (A.p_tilde_i[i - 1] <= 0.0) continue;
            best = std::max(best, oracle_lb1_row(A, i, sc.cons, got.mu));
        }
        CAPTURE(sc.params.c);
        CHECK(std::abs(got.value.nats - best) < 1e-6);
        CHECK(got.argmax_interval >= 1);
        CHECK(got.argmax_interval <= A.n);
    }
}

TEST_CASE("single-bin rate decreases in the peak at fixed mean-to-peak ratio") {
    auto sc = scenarios()[0];
    auto A = channel::make_arrival_matrix(sc.params);
    double prev = 1e300;
    for (double M : {5.0, 10.0, 20.0, 40.0}) {
        bounds::constraint_set cons{0.2 * M, M};
        double v = bounds::lower_bound_1(A, cons).value.nats;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("sum-channel rates match their quadrature re-assembly") {
    for (const auto& sc : scenarios()) {
        auto A = channel::make_arrival_matrix(sc.params);
        auto got = bounds::lower_bound_2(A, sc.cons);
        auto want = oracle_lb2(A, sc.cons, got.phi);
        CAPTURE(sc.params.c);
        CHECK(std::abs(got.r1.nats - want.r1) < 1e-6);
        CHECK(std::abs(got.r2.nats - want.r2) < 1e-6);
        CHECK(got.best.nats == std::max(got.r1.nats, got.r2.nats));
        // the two assemblies differ by exactly m - ln m - 1 >= 0
        double offset = sc.params.m - std::log(double(sc.params.m)) - 1.0;
        CHECK(std::abs((got.r1.nats - got.r2.nats) - offset) < 1e-12);
        CHECK(got.r1.nats >= got.r2.nats);
    }
}

TEST_CASE("timing rate at fixed concentration") {
    auto sc = scenarios()[0];
    auto A = channel::make_arrival_matrix(sc.params);
    double x = 7.0;
    auto got = bounds::timing_rate_given_x(A, x);
    double best = -1e300;
    int arg = 0;
    for (int i = 1; i <= A.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < A.m; ++j)
            acc += oracle_poisson_entropy(A.at(i, j) * x);
        double v = std::log(double(A.m)) + acc / A.m -
                   std::log(A.p_i_star[i - 1] * x + 1.0 / 12.0);
        if (v > best) { best = v; arg = i; }
    }
    CHECK(std::abs(got.value.nats - best) < 1e-10);
    CHECK(got.argmax_interval == arg);
    CHECK_THROWS_AS(bounds::timing_rate_given_x(A, 0.0), numeric_error);
}

TEST_CASE("mixture entropy expansion is exact for one gaussian") {
    for (double var : {0.25, 1.0, 9.0}) {
        std::vector<bounds::mixture_component> one = {{1.0, 2.0, var}};
        double want = 0.5 * std::log(2.0 * M_PI * M_E * var);
        CHECK(std::abs(bounds::mixture_entropy_lower(one, 2.0, 2) - want) < 1e-9);
        CHECK(std::abs(bounds::mixture_entropy_lower(one, 2.0, 4) - want) < 1e-8);
    }
}

TEST_CASE("mixture entropy expansion tracks quadrature for tight mixtures") {
    std::vector<bounds::mixture_component> comps = {
        {0.25, 0.00, 1.00}, {0.25, 0.10, 1.20}, {0.25, -0.05, 0.90}, {0.25, 0.20, 1.10}};
    double truth = oracle_mixture_entropy(comps);
    double est = bounds::mixture_entropy_lower(comps, 0.0, 4);
    CHECK(std::abs(est - truth) < 1e-3);
    // the two independent Taylor-coefficient schemes agree
    auto z = oracle_log_density_taylor(comps, 0.0, 4);
    double rebuilt = 0.0;
    for (int k = 0; k < int(z.size()); ++k) {
        double acc = 0.0;
        for (const auto& c : comps)
            acc += c.weight * specfun::gaussian_noncentral_moment(k, c.mean, c.variance);
        rebuilt -= z[k] * acc;
    }
    CHECK(std::abs(est - rebuilt) < 1e-6);
}

TEST_CASE("mixture entropy expansion is not a lower bound for split mixtures") {
    // two far-apart components: the expansion around one mode sees the
    // other only through the polynomial tail and badly overshoots
    std::vector<bounds::mixture_component> split = {{0.5, -10.0, 1.0}, {0.5, 10.0, 1.0}};
    double truth = oracle_mixture_entropy(split);
    CHECK(std::abs(truth - (0.5 * std::log(2.0 * M_PI * M_E) + std::log(2.0))) < 1e-6);
    double est = bounds::mixture_entropy_lower(split, 10.0, 4);
    CHECK(est > truth);
    CHECK(std::abs(est - 102.112086) < 1e-3);
}

TEST_CASE("mixture entropy expansion input validation") {
    std::vector<bounds::mixture_component> one = {{1.0, 0.0, 1.0}};
    CHECK_THROWS_AS(bounds::mixture_entropy_lower({}, 0.0, 4), numeric_error);
    CHECK_THROWS_AS(bounds::mixture_entropy_lower(one, 0.0, 3), numeric_error);
    CHECK_THROWS_AS(bounds::mixture_entropy_lower(one, 0.0, 18), numeric_error);
    std::vector<bounds::mixture_component> bad_var = {{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(bounds::mixture_entropy_lower(bad_var, 0.0, 4), numeric_error);
    std::vector<bounds::mixture_component> bad_w = {{0.7, 0.0, 1.0}};
    CHECK_THROWS_AS(bounds::mixture_entropy_lower(bad_w, 0.0, 4), numeric_error);
}

TEST_CASE("difference-channel rate matches its quadrature re-assembly") {
    for (const auto& sc : scenarios()) {
        auto A = channel::make_arrival_matrix(sc.params);
        bounds::bound_config cfg;
        auto got = bounds::lower_bound_3(A, sc.cons, cfg);
        double best = -1e300;
        for (int i = 2; i <= A.n; ++i) {
            bool ok = true;
            for (int j = 0; j < A.m; ++j)
                if (A.q_prime_at(i, j) <= 0.0) ok = false;
            if (!ok) continue;
            best = std::max(best,
                            oracle_lb3_row(A, i, sc.cons, got.u, cfg.taylor_order_r, false));
        }
        CAPTURE(sc.params.c);
        CHECK(std::abs(got.value.nats - best) < 1e-6);
    }
}

TEST_CASE("difference-channel prefactor variants differ by the documented term") {
    auto sc = scenarios()[0];
    auto A = channel::make_arrival_matrix(sc.params);
    bounds::bound_config cfg;
    auto base = bounds::lower_bound_3(A, sc.cons, cfg);
    cfg.paper_literal = true;
    auto lit = bounds::lower_bound_3(A, sc.cons, cfg);
    // same u (it only depends on the constraints), bigger first term
    CHECK(lit.u == base.u);
    double M = sc.cons.M;
    double extra = std::log(M) * specfun::erf(M / std::sqrt(base.u)) / (4.0 * sc.params.m);
    // holds when the same bin wins in both variants
    if (lit.argmax_interval == base.argmax_interval)
        CHECK(std::abs((lit.value.nats - base.value.nats) - extra) < 1e-10);
    CHECK(lit.value.nats >= base.value.nats);
}

TEST_CASE("difference-channel rate infeasibility") {
    auto sc = scenarios()[0];
    auto A = channel::make_arrival_matrix(sc.params);
    bounds::constraint_set heavy{6.0, 10.0};  // mean-to-peak 0.6 >= 1/2
    CHECK_THROWS_AS(bounds::lower_bound_3(A, heavy, {}), infeasible_error);

    channel::channel_params single = sc.params;
    single.n = 1;
    single.t_b = single.T_s;
    auto A1 = channel::make_arrival_matrix(single);
    CHECK_THROWS_AS(bounds::lower_bound_3(A1, sc.cons, {}), infeasible_error);
}

TEST_CASE("symmetric-divergence interval bound") {
    channel::arrival_matrix A;
    A.n = 1;
    A.m = 1;
    A.p = {0.3};
    A.p_i_star = {0.3};
    A.p_prime_j = {0.3};
    A.p_star = 0.3;
    A.p_tilde_i = {0.3};
    bounds::constraint_set cons{2.0, 10.0};
    double want = (2.0 * 0.3 / 10.0) * (10.0 - 2.0) * std::log(10.0 * 0.3 / 1.0 + 1.0);
    CHECK(std::abs(bounds::sym_kl_interval_bound(A, 1, cons, 1.0) - want) < 1e-15);
    CHECK_THROWS_AS(bounds::sym_kl_interval_bound(A, 1, cons, 0.0), numeric_error);
    CHECK_THROWS_AS(bounds::sym_kl_interval_bound(A, 2, cons, 1.0), config_error);
    bounds::constraint_set heavy{6.0, 10.0};
    CHECK_THROWS_AS(bounds::sym_kl_interval_bound(A, 1, heavy, 1.0), infeasible_error);
}

TEST_CASE("upper bound adds the per-bin terms") {
    auto sc = scenarios()[0];
    auto A = channel::make_arrival_matrix(sc.params);
    double acc = 0.0;
    for (int i = 1; i <= A.n; ++i)
        acc += bounds::sym_kl_interval_bound(A, i, sc.cons, sc.params.lambda0);
    CHECK(std::abs(bounds::upper_bound(A, sc.cons, sc.params.lambda0).nats - acc) < 1e-12);
}

TEST_CASE("constraint validation") {
    bounds::constraint_set ok{2.0, 10.0};
    CHECK_NOTHROW(ok.validate());
    bounds::constraint_set no_mean{0.0, 10.0};
    CHECK_THROWS_AS(no_mean.validate(), config_error);
    bounds::constraint_set no_peak{2.0, 0.0};
    CHECK_THROWS_AS(no_peak.validate(), config_error);
    bounds::constraint_set inverted{11.0, 10.0};
    CHECK_THROWS_AS(inverted.validate(), config_error);
}
