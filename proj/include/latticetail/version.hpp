#pragma once

namespace latticetail {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latticetail
