#pragma once

namespace fermicert {

inline constexpr const char* kVersion = "fermicert 0.1.0";

}  // namespace fermicert
