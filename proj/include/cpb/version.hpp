#pragma once

namespace cpb {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpb
