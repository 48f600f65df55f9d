#include "support/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace jtac_test {

namespace {

// 15-point Kronrod nodes (positive half) with the embedded 7-point Gauss rule.
const double xk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
const double wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
const double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct panel_result {
    double value;
    double error;
};

panel_result kronrod(const std::function<double(double)>& f, double a, double b) {
    double h = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - h * xk[i]);
        fv[14 - i] = f(mid + h * xk[i]);
    }
    fv[7] = f(mid);
    double resk = wk[7] * fv[7];
    for (int i = 0; i < 7; ++i) resk += wk[i] * (fv[i] + fv[14 - i]);
    // the embedded Gauss rule sits on the odd-indexed Kronrod nodes + center
    double resg = wg[3] * fv[7];
    for (int i = 1; i < 7; i += 2) resg += wg[(i - 1) / 2] * (fv[i] + fv[14 - i]);
    return {resk * h, std::fabs((resk - resg) * h)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth) {
    panel_result r = kronrod(f, a, b);
    if (r.error <= tol || depth >= 52) return r.value;
    double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth + 1) +
           adapt(f, mid, b, 0.5 * tol, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: abs_tol must be positive");
    if (a == b) return 0.0;
    return adapt(f, a, b, abs_tol, 0);
}

double integrate_sqrt_origin(const std::function<double(double)>& f, double b,
                             double abs_tol) {
    auto g = [&](double s) { return f(s * s) * 2.0 * s; };
    return integrate(g, 0.0, std::sqrt(b), abs_tol);
}

} // namespace jtac_test
