#pragma once

namespace tte::version {

inline constexpr const char* name = "tte";
inline constexpr const char* string = "0.1.0";

}  // namespace tte::version
