#pragma once

namespace wedge {
inline constexpr const char* kVersion = "0.1.0";
}
