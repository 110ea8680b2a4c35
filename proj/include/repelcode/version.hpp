#pragma once

namespace repelcode {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace repelcode
