#include "hole_energy/errors.hpp"

namespace hole {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid_input";
        case ErrorKind::domain: return "domain";
        case ErrorKind::unsupported_configuration: return "unsupported_configuration";
        case ErrorKind::radius_too_large: return "radius_too_large";
        case ErrorKind::not_subharmonic: return "not_subharmonic";
        case ErrorKind::inconsistent_pair: return "inconsistent_pair";
        case ErrorKind::no_free_boundary: return "no_free_boundary";
        case ErrorKind::convergence: return "convergence";
        case ErrorKind::not_localized: return "not_localized";
        case ErrorKind::contour: return "contour";
        case ErrorKind::estimation_failed: return "estimation_failed";
        case ErrorKind::config: return "config";
    }
    return "unknown";
}

}  // namespace hole
