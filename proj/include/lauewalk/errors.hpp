#pragma once

#include <stdexcept>

namespace lauewalk {

/// Non-finite or out-of-range input to a construction or operation.
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fringe series with no usable modulation (constant, or max+min = 0).
class UndefinedContrastError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation requested on a geometry it does not support.
class UnsupportedGeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace lauewalk
