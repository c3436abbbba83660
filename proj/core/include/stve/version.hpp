#pragma once

#include <string_view>

namespace stve {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace stve
