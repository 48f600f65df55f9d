#pragma once

#include <stdexcept>
#include <string>

namespace jtac {

// Parameter combinations outside the validity region of a solver or bound
// (e.g. a mean-to-peak ratio for which the defining equation has no root).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative method hit its term/iteration cap before reaching tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, double last_gap, long iterations)
        : std::runtime_error(what), last_gap(last_gap), iterations(iterations) {}
    double last_gap;
    long iterations;
};

// A computation detected loss of numerical validity (degenerate variance,
// finite-difference blowup, overflow).
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Alphabet or matrix size above the enforced desk-scale caps.
class size_error : public std::runtime_error {
public:
    explicit size_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent experiment configuration.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jtac
