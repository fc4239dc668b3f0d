#pragma once

namespace metaplectic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace metaplectic
