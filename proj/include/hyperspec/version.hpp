#pragma once

namespace hyperspec {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hyperspec
