#pragma once

namespace tubal {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tubal
