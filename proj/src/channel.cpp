#include "jtac/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jtac/errors.hpp"

namespace jtac::channel {

double c_from_geometry(const channel_geometry& g) {
    if (g.d <= 0.0 || g.D <= 0.0)
        throw config_error("channel geometry requires d > 0 and D > 0");
    return g.d * g.d / (2.0 * g.D);
}

void channel_params::validate() const {
    if (c <= 0.0) throw config_error("channel: c must be positive");
    if (T_s <= 0.0) throw config_error("channel: T_s must be positive");
    if (t_b <= 0.0) throw config_error("channel: t_b must be positive");
    if (n < 1 || n > 512) throw config_error("channel: n out of range [1, 512]");
    if (m < 1 || m > 512) throw config_error("channel: m out of range [1, 512]");
    if (std::fabs(n * t_b - T_s) > 1e-9 * std::max(1.0, T_s))
        throw config_error("channel: bins must cover the slot (n * t_b == T_s)");
    if (sigma_x < 0.0) throw config_error("channel: sigma_x must be nonnegative");
    if (tau_x < 0.0) throw config_error("channel: tau_x must be nonnegative");
    if (m > 1 && (m - 1) * sigma_x > tau_x + 1e-12)
        throw config_error("channel: release offsets exceed tau_x");
    if (tau_x > T_s + 1e-12)
        throw config_error("channel: tau_x must not exceed the slot length");
    if (lambda0 < 0.0) throw config_error("channel: lambda0 must be nonnegative");
}

double levy_pdf(double t, double release, double c) {
    double s = t - release;
    if (s <= 0.0) return 0.0;
    return std::sqrt(c / (2.0 * std::numbers::pi)) * std::exp(-c / (2.0 * s)) /
           (s * std::sqrt(s));
}

double levy_cdf(double t, double release, double c) {
    double s = t - release;
    if (s <= 0.0) return 0.0;
    return std::erfc(std::sqrt(c / (2.0 * s)));
}

double arrival_prob(int i, int j, const channel_params& p) {
    if (i < 1 || i > p.n) throw config_error("arrival_prob: bin index out of range");
    if (j < 0 || j >= p.m) throw config_error("arrival_prob: release index out of range");
    double rel = j * p.sigma_x;
    double a = (i - 1) * p.t_b - rel;
    double b = i * p.t_b - rel;
    if (b <= 0.0) return 0.0;
    double upper = std::erfc(std::sqrt(p.c / (2.0 * b)));
    if (a <= 0.0) return upper;
    double lower = std::erfc(std::sqrt(p.c / (2.0 * a)));
    return std::max(0.0, upper - lower);
}

arrival_matrix make_arrival_matrix(const channel_params& p) {
    p.validate();
    arrival_matrix A;
    A.n = p.n;
    A.m = p.m;
    A.p.resize(static_cast<size_t>(p.n) * p.m);
    for (int i = 1; i <= p.n; ++i)
        for (int j = 0; j < p.m; ++j)
            A.p[static_cast<size_t>(i - 1) * p.m + j] = arrival_prob(i, j, p);

    A.p_i_star.assign(p.n, 0.0);
    A.p_tilde_i.assign(p.n, std::numeric_limits<double>::infinity());
    A.p_prime_j.assign(p.m, 0.0);
    for (int i = 1; i <= p.n; ++i) {
        for (int j = 0; j < p.m; ++j) {
            double v = A.at(i, j);
            A.p_i_star[i - 1] = std::max(A.p_i_star[i - 1], v);
            A.p_tilde_i[i - 1] = std::min(A.p_tilde_i[i - 1], v);
            A.p_prime_j[j] += v;
        }
    }
    A.p_star = *std::max_element(A.p_prime_j.begin(), A.p_prime_j.end());

    if (p.n >= 2) {
        A.q.resize(static_cast<size_t>(p.n - 1) * p.m);
        A.q_prime.resize(static_cast<size_t>(p.n - 1) * p.m);
        for (int i = 2; i <= p.n; ++i) {
            for (int j = 0; j < p.m; ++j) {
                size_t idx = static_cast<size_t>(i - 2) * p.m + j;
                A.q[idx] = A.at(i, j) - A.at(i - 1, j);
                A.q_prime[idx] = A.at(i, j) + A.at(i - 1, j);
            }
        }
    }
    return A;
}

double poisson_likelihood(long y, double x, int i, int j, const arrival_matrix& A,
                          double lambda0) {
    if (y < 0) return 0.0;
    if (x < 0.0) throw numeric_error("poisson_likelihood: negative input");
    double mean = x * A.at(i, j) + lambda0;
    if (mean == 0.0) return (y == 0) ? 1.0 : 0.0;
    double lp = -mean + y * std::log(mean) - std::lgamma(static_cast<double>(y) + 1.0);
    return std::exp(lp);
}

double sum_likelihood(long y, double x, int j, const arrival_matrix& A, double lambda0) {
    if (y < 0) return 0.0;
    if (x < 0.0) throw numeric_error("sum_likelihood: negative input");
    double mean = x * A.p_prime_j[j] + A.n * lambda0;
    if (mean == 0.0) return (y == 0) ? 1.0 : 0.0;
    double lp = -mean + y * std::log(mean) - std::lgamma(static_cast<double>(y) + 1.0);
    return std::exp(lp);
}

double diff_likelihood(double y, double x, int i, int j, const arrival_matrix& A) {
    if (x <= 0.0) throw numeric_error("diff_likelihood: input must be positive");
    if (i < 2) throw config_error("diff_likelihood: bin index must be at least 2");
    double mean = x * A.q_at(i, j);
    double var = x * A.q_prime_at(i, j);
    if (var <= 0.0)
        throw numeric_error("diff_likelihood: degenerate variance (both bins empty)");
    double z = y - mean;
    return std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

} // namespace jtac::channel
