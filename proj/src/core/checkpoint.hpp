// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "eps_state.hpp"

namespace machlim {

// Binary checkpoints: header = magic "MLIM", format version u32, n u32,
// L f64 (all little-endian), then each field as a contiguous f64 array in
// declared order (EpsState: p, u, H, theta; LimitState: w, h, vartheta, pi).
// The state time is not part of the format; loading yields time = 0.
void write_checkpoint(const EpsState& state, const std::string& path);
void write_checkpoint(const LimitState& state, const std::string& path);

// expected_n (when set) turns a grid-size mismatch into a FormatError.
EpsState read_eps_checkpoint(const std::string& path,
                             std::optional<int> expected_n = std::nullopt);
LimitState read_limit_checkpoint(const std::string& path,
                                 std::optional<int> expected_n = std::nullopt);

}  // namespace machlim
