#pragma once

#include <functional>

// Adaptive Gauss-Kronrod integration used by the test oracles. Lives outside
// the library on purpose: oracle results must not share code with the
// formulas they check.
namespace jtac_test {

// Integral of f over [a, b], adaptive 15-point Kronrod / 7-point Gauss
// bisection until the local error estimate drops below abs_tol (split
// geometrically across subintervals).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-11);

// Integral of f over (0, b] where f(x) behaves like x^{-1/2} (possibly times
// ln x) near 0; substitutes x = s^2 to remove the endpoint singularity.
double integrate_sqrt_origin(const std::function<double(double)>& f, double b,
                             double abs_tol = 1e-11);

} // namespace jtac_test
