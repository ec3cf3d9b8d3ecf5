#pragma once

#include <stdexcept>
#include <string>

namespace jetforge {

enum class ErrorCode {
    DivisionByZero,
    NonAffineExponent,
    UnclassifiedSymbol,
    RecursionLimit,
    Singular,
    NonLinear,
    NotDivisible,
    CancellationFailure,
    DegreeOverflow,
    SamplingExhausted,
    FractionalPowerOfNegative,
    InexactPower,
    BadInput,
};

const char* error_code_name(ErrorCode c);

/// Exception carrying a machine-readable code plus a human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace jetforge
