// Copyright 2026 The snvtune Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace snvtune {

inline constexpr const char* kToolName = "snvtune";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace snvtune
