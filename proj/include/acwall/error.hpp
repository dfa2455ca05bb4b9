#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace acwall {

enum class ErrorKind {
    Domain,       // argument outside the admissible set (e.g. center outside (-a, b))
    Validation,   // malformed configuration or input data
    Resource,     // request would exceed a hard resource cap
    Solver,       // eigen-iteration or linear solve failed
    Truncation,   // spectral truncation error above tolerance
    BlowUp,       // non-finite or exploding state during time stepping
    Convergence,  // iteration cap reached
    Tube,         // profile outside the tube around the standing-wave manifold
    Bracketing,   // no sign change in the bracketing interval
    Resolution,   // requested scale finer than the sampling
    Io,
};

std::string_view to_string(ErrorKind kind);

// Process exit code associated with each error family.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace acwall
