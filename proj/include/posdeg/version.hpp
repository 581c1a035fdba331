#pragma once

namespace posdeg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace posdeg
