#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hole {

enum class ErrorKind {
    invalid_input,
    domain,
    unsupported_configuration,
    radius_too_large,
    not_subharmonic,
    inconsistent_pair,
    no_free_boundary,
    convergence,
    not_localized,
    contour,
    estimation_failed,
    config,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto an exit code and callers can branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hole
