// errors.hpp — exception hierarchy shared by the whole library
#pragma once

#include <stdexcept>
#include <string>

namespace hamcoup {

// Base of everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension / block-structure mismatch between a state, layout, or operator.
struct LayoutError : Error {
    using Error::Error;
};

// NaN/Inf encountered, or an evaluation produced a non-finite value.
struct NumericError : Error {
    using Error::Error;
};

// An integrator cannot handle the given system (e.g. Verlet on a
// non-separable Hamiltonian or a momentum-dependent interaction).
struct CapabilityError : Error {
    using Error::Error;
};

// An iterative solve did not reach its tolerance.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what), last_residual(residual) {}
    double last_residual;
};

// Caller-side misuse: empty sample sets, missing constraints, bad step lists.
struct UsageError : Error {
    using Error::Error;
};

// Config-file problem; carries the offending line (0 = file-level).
struct ConfigError : Error {
    ConfigError(const std::string& what, int line_no = 0)
        : Error(what), line(line_no) {}
    int line;
};

} // namespace hamcoup
