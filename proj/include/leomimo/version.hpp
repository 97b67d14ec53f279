// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace leomimo {
inline constexpr const char* kProjectName = "leomimo";
inline constexpr const char* kVersion = "0.1.0";
}  // namespace leomimo
