#include "ringlaser/error.hpp"

namespace ringlaser {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_geometry: return "invalid_geometry";
    case ErrorKind::invalid_parameter: return "invalid_parameter";
    case ErrorKind::singular_evaluation: return "singular_evaluation";
    case ErrorKind::not_in_far_field: return "not_in_far_field";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::degenerate_steady_state: return "degenerate_steady_state";
    case ErrorKind::undefined_statistics: return "undefined_statistics";
    case ErrorKind::stale_steady_state: return "stale_steady_state";
    case ErrorKind::window_truncation: return "window_truncation";
    case ErrorKind::broken_symmetry: return "broken_symmetry";
    case ErrorKind::invalid_config: return "invalid_config";
    case ErrorKind::resource_limit: return "resource_limit";
    }
    return "unknown";
}

} // namespace ringlaser
