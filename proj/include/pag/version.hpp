#pragma once

namespace pag {

inline constexpr const char* kToolName = "pag";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pag
