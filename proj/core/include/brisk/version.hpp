#pragma once

namespace brisk {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace brisk
