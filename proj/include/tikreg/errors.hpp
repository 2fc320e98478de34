#pragma once

#include <stdexcept>
#include <string>

namespace tikreg {

// Invalid sizes / incompatible shapes.
struct dimension_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numeric routine failed (non-convergence, bad pivot, ...). Carries the
// offending quantity so callers can report it.
struct numeric_error : std::runtime_error {
    numeric_error(const std::string& what, double detail_value)
        : std::runtime_error(what), detail(detail_value) {}
    double detail;
};

// First-order perturbation formulas require simple eigenvalues.
struct degenerate_spectrum_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tikreg
