#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

/// Raised when an operation is called outside its documented domain.
/// The message names the violated condition, e.g. "a > -1".
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a discretization cannot meet its own accuracy budget
/// (head/tail quadrature bounds too large, image sums not converged).
class ResolutionError : public std::runtime_error {
 public:
  explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace besovlab
