// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "field.hpp"

namespace machlim {

enum class IdentityName {
    div_fa,
    curl_fa,
    div_cross,
    curl_cross,
    grad_dot,
    energy_exchange_1,
    energy_exchange_2,
};

const char* to_string(IdentityName name);
std::vector<IdentityName> all_identities();

struct IdentityInputs {
    std::optional<ScalarField> f;
    std::optional<VectorField> a;
    std::optional<VectorField> b;
    std::optional<VectorField> u;
    std::optional<VectorField> H;
};

struct IdentityCase {
    IdentityName name;
    double residual_norm;  // L2 of LHS - RHS
    double input_norm;     // sum of H1 norms of the inputs

    double relative() const { return residual_norm / std::max(1.0, input_norm); }
};

// Evaluates both sides with spectral derivatives and dealiased products and
// returns the residual.  Missing inputs are a contract violation.
IdentityCase check_identity(IdentityName name, const IdentityInputs& inputs);

// One case per identity on random fields band-limited to n/6 (products stay
// alias-free); `rounds` independent draws per identity, worst case kept.
std::vector<IdentityCase> run_identity_suite(const Grid& grid, std::uint64_t seed,
                                             int rounds);

}  // namespace machlim
