#pragma once

namespace nschc {
inline constexpr const char* kVersion = "0.1.0";
}
