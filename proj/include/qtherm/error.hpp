#pragma once

#include <stdexcept>
#include <string>

namespace qtherm {

enum class ErrorKind {
    Validation,        // malformed input, bad scenario field
    Positivity,        // transition energy eps2 <= 0
    DegenerateDetuning,
    DegenerateRates,
    DarkSector,        // closed-form CHB solution requested in the dark regime
    Range,
    KernelDimension,
    ToleranceFailure,
    InvariantBreach,
    EigensolverFailure,
    NoEntanglement,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

// Validation and Io errors are input problems; every other kind is a physics error.
inline bool is_physics_error(ErrorKind kind) noexcept {
    return kind != ErrorKind::Validation && kind != ErrorKind::Io;
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace qtherm
