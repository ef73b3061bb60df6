#pragma once

namespace csvd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace csvd
