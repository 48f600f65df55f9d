#include "jtac/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "jtac/errors.hpp"

namespace jtac::specfun {

namespace {

constexpr double euler_gamma = 0.577215664901532860606512090082402431;

// Ascending series Ei(x) = gamma + ln|x| + sum_{k>=1} x^k/(k k!).
// All terms positive for x > 0; for -1 <= x < 0 the alternating terms decay
// fast enough that no cancellation builds up.
double ei_series(double x) {
    long double sum = 0.0L;
    long double term = 1.0L;
    for (int k = 1; k <= 1000; ++k) {
        term *= x / k;
        long double add = term / k;
        sum += add;
        if (std::fabs(static_cast<double>(add)) <
            1e-18 * (1.0 + std::fabs(static_cast<double>(sum))))
            return euler_gamma + std::log(std::fabs(x)) + static_cast<double>(sum);
    }
    throw convergence_error("expint_ei: ascending series did not converge", 0.0, 1000);
}

// Modified Lentz continued fraction for E1(z), z >= 1:
// E1(z) = e^{-z} / (z + 1 - 1^2/(z + 3 - 2^2/(z + 5 - ...)))
double e1_continued_fraction(double z) {
    const double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int k = 1; k <= 400; ++k) {
        double a = -static_cast<double>(k) * k;
        b += 2.0;
        d = b + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-z) * f;
}

// Asymptotic Ei(x) ~ e^x/x * sum_k k!/x^k, truncated at the smallest term.
double ei_asymptotic(double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
        double next = term * k / x;
        if (next >= term) break;  // series started diverging
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(x) / x * sum;
}

} // namespace

double erf(double x) { return std::erf(x); }

double log_factorial(int k) {
    if (k < 0) throw numeric_error("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(k) + 1.0);
}

double expint_ei(double x) {
    if (x == 0.0 || !std::isfinite(x))
        throw numeric_error("expint_ei: argument must be finite and nonzero");
    if (x > 700.0)
        throw numeric_error("expint_ei: overflow for x > 700 (Ei(x) ~ e^x/x)");
    if (x < 0.0) {
        double z = -x;
        if (z <= 1.0) return ei_series(x);
        return -e1_continued_fraction(z);
    }
    if (x < 40.0) return ei_series(x);
    return ei_asymptotic(x);
}

double hyp2f2_half(double x, series_control ctl) {
    if (!std::isfinite(x)) throw numeric_error("hyp2f2_half: non-finite argument");
    if (x <= -25.0) {
        // The alternating series cancels catastrophically here (terms grow to
        // ~e^{|x|} while the value stays O(1/sqrt|x|)). Use the closed form
        // obtained from int_0^s ln(t) e^{-t^2} dt with s = sqrt(-x), whose
        // upper tail is below machine precision once s^2 >= 25:
        //   2F2 = [ (sqrt(pi)/2) ln(s) erf(s) + (sqrt(pi)/4)(gamma + 2 ln 2)
        //           + T(s) ] / s,
        //   T(s) = e^{-s^2} ( ln(s)/(2s) + (1 - ln(s))/(4 s^3) + ... )
        double s = std::sqrt(-x);
        double sp = std::sqrt(std::numbers::pi);
        double tail = std::exp(-s * s) *
                      (std::log(s) / (2.0 * s) + (1.0 - std::log(s)) / (4.0 * s * s * s));
        return (0.5 * sp * std::log(s) * std::erf(s) +
                0.25 * sp * (euler_gamma + 2.0 * std::numbers::ln2) + tail) / s;
    }
    long double sum = 0.0L;
    long double comp = 0.0L;  // Kahan compensation
    long double term = 1.0L;
    for (int k = 0; k < ctl.max_terms; ++k) {
        long double y = term - comp;
        long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        long double ratio = static_cast<long double>(x) * (2 * k + 1) * (2 * k + 1) /
                            (static_cast<long double>(2 * k + 3) * (2 * k + 3) * (k + 1));
        term *= ratio;
        if (std::fabs(static_cast<double>(term)) <=
            ctl.rel_tol * 1e-2 * std::fabs(static_cast<double>(sum)) && k > 2)
            return static_cast<double>(sum);
    }
    throw convergence_error("hyp2f2_half: series cap exceeded",
                            std::fabs(static_cast<double>(term)), ctl.max_terms);
}

double poisson_entropy(double lambda) {
    if (lambda < 0.0) throw numeric_error("poisson_entropy: negative mean");
    if (lambda == 0.0) return 0.0;
    double sd = std::sqrt(lambda);
    long k_lo = static_cast<long>(std::max(0.0, std::floor(lambda - 10.0 * sd - 30.0)));
    long k_hi = static_cast<long>(std::ceil(lambda + 10.0 * sd + 50.0));
    double log_lambda = std::log(lambda);
    double h = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
        double lp = -lambda + k * log_lambda - std::lgamma(static_cast<double>(k) + 1.0);
        h -= std::exp(lp) * lp;
    }
    return h;
}

double gaussian_noncentral_moment(int k, double mean, double variance) {
    if (k < 0 || k > 64)
        throw numeric_error("gaussian_noncentral_moment: order out of range [0, 64]");
    if (variance < 0.0)
        throw numeric_error("gaussian_noncentral_moment: negative variance");
    // sum over even central orders l: C(k,l) (l-1)!! var^{l/2} mean^{k-l}
    double total = 0.0;
    double binom = 1.0;  // C(k, l) updated incrementally over l
    for (int l = 0; l <= k; ++l) {
        if (l % 2 == 0) {
            double dfact = 1.0;
            for (int t = l - 1; t > 1; t -= 2) dfact *= t;
            double mp = (k - l == 0) ? 1.0 : std::pow(mean, k - l);
            total += binom * dfact * std::pow(variance, l / 2.0) * mp;
        }
        binom = binom * (k - l) / (l + 1);
    }
    return total;
}

} // namespace jtac::specfun
