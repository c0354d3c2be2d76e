#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ringlaser {

enum class ErrorKind {
    invalid_geometry,
    invalid_parameter,
    singular_evaluation,
    not_in_far_field,
    convergence,
    degenerate_steady_state,
    undefined_statistics,
    stale_steady_state,
    window_truncation,
    broken_symmetry,
    invalid_config,
    resource_limit,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Integrator failure; carries the local error estimate that was reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double achieved_error)
        : Error(ErrorKind::convergence, message), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace ringlaser
