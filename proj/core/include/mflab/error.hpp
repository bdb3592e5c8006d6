// error.hpp
// Error reporting shared by every mflab module.
//
// All failures are thrown as mflab::Error. The kind is machine-readable so
// the CLI can map it to an exit code and print `error:<kind>: message`.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mflab {

enum class ErrorKind {
    Domain,        // argument outside the mathematical domain (sigma <= 1, x < 16, ...)
    EmptyRange,    // sieve limit below 2
    Capacity,      // request above a configured ceiling
    Coverage,      // query outside what a table or trace covers
    Singular,      // local Euler factor numerically zero
    Usage,         // malformed specification string or flag
    Verification,  // a checked inequality failed
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace mflab
