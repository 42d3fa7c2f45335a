#pragma once

namespace heisenspec {

inline constexpr const char* tool_name = "heisenspec";
inline constexpr const char* tool_version = "0.1.0";

}
