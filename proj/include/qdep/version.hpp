#pragma once

namespace qdep {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace qdep
