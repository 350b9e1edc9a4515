// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace derw_lab {

/// SHA-256 of a byte string, hex-encoded. Used for the manifest file
/// inventory and the determinism checks.
std::string sha256_hex(std::string_view data);

}  // namespace derw_lab
