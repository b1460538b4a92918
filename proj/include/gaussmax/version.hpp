#pragma once

namespace gaussmax {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gaussmax
