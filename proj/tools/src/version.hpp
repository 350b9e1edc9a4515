// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace derw_lab {

inline constexpr const char* kToolName = "derw-lab";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace derw_lab
