#include "acwall/error.hpp"

namespace acwall {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Domain: return "domain";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Solver: return "solver";
        case ErrorKind::Truncation: return "truncation";
        case ErrorKind::BlowUp: return "blow-up";
        case ErrorKind::Convergence: return "convergence";
        case ErrorKind::Tube: return "tube";
        case ErrorKind::Bracketing: return "bracketing";
        case ErrorKind::Resolution: return "resolution";
        case ErrorKind::Io: return "i/o";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::Domain:
        case ErrorKind::Resource:
        case ErrorKind::Resolution:
            return 2;
        case ErrorKind::Io:
            return 4;
        default:
            return 3;
    }
}

}  // namespace acwall
