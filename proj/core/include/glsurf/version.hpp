#pragma once

namespace glsurf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace glsurf
