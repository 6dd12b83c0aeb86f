#pragma once

#include <string_view>

namespace csp {

inline constexpr std::string_view kToolName = "csplab";
inline constexpr std::string_view kVersion = "0.1.0";

} // namespace csp
