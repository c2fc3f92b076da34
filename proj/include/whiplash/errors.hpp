#pragma once

#include <stdexcept>
#include <string>

namespace whiplash {

// Configuration / precondition failures carry the offending key or argument
// name in the message.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Nesterov damping alpha/t is undefined at t <= 0; callers must start at t0 > 0.
struct singular_damping_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Requested a diagnostic the cost function cannot support (e.g. Lyapunov
// energy without a known minimum value).
struct unsupported_diagnostic_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Condition number of a matrix with a non-positive eigenvalue (saddle).
struct indefinite_matrix_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A numeric evaluation produced NaN/inf where a finite value was required.
struct nonfinite_value_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace whiplash
