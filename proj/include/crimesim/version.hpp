#pragma once

namespace crimesim {
inline constexpr const char* kVersion = "0.1.0";
}
