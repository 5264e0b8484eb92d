#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jspec {

enum class ErrorKind {
    SingularInput,
    NumericalFailure,
    BadIndex,
    BadResolution,
    EmptyInput,
    DirsetMismatch,
    DegenerateBody,
    DimMismatch,
    ParseError,
    InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this exception; kind() is what callers branch on.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    // Errors caused by bad user input rather than by the numerics.
    bool is_validation() const noexcept {
        return kind_ != ErrorKind::NumericalFailure && kind_ != ErrorKind::DegenerateBody;
    }

private:
    ErrorKind kind_;
};

} // namespace jspec
