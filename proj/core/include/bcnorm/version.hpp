#pragma once

namespace bcnorm {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace bcnorm
