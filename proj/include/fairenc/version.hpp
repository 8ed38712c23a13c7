#pragma once

namespace fairenc {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace fairenc
