// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace machlim {

// Precondition / arity / argument violations: caller bug.
struct ContractViolation : std::runtime_error {
    explicit ContractViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values, overflow guards, blow-up detection.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver failed to reach tolerance.
struct ConvergenceError : std::runtime_error {
    double final_residual;
    ConvergenceError(const std::string& msg, double res)
        : std::runtime_error(msg), final_residual(res) {}
};

// Malformed checkpoint / CSV input.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace machlim
