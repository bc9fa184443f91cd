#pragma once

#include <stdexcept>
#include <string>

namespace cherncat {

/// Malformed input data: bad JSON, unresolved labels, out-of-range degrees.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural mismatch between operands (matrix shapes, contexts, parities).
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precondition violation on otherwise well-formed data.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Numerically singular operator where an inverse is required.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cherncat
