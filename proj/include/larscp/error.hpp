#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace larscp {

enum class ErrorKind {
    invalid_argument,
    dimension_mismatch,
    non_finite,
    rank_deficient,
    singular,
    parse,
    io,
    no_solution,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All domain failures raised by the library. The kind is what the CLI
// reports in its machine-readable error object.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace larscp
