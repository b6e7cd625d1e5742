#pragma once

namespace scaledim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace scaledim
