#pragma once

#include <stdexcept>
#include <string>

namespace hcone {

// Bad argument shape or range (wrong vector length, p < 1, empty grid ...).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A point on or outside the boundary of the cone / domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Integral parameters outside the convergence range.
struct DivergenceError : std::domain_error {
    using std::domain_error::domain_error;
};

// Successive refinements disagree beyond tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hcone
