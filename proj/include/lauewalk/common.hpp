#pragma once

#include <cstddef>

namespace lauewalk {

/// Signed lattice / plane index type used throughout.
using Index = std::ptrdiff_t;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lauewalk
