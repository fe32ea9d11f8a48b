#pragma once

namespace bcm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bcm
