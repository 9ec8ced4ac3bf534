#pragma once

namespace fpt {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace fpt
