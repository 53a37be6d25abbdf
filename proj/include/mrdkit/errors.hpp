#pragma once

#include <stdexcept>
#include <string>

namespace mrdkit {

/// Precondition violation on user-supplied data or parameters.
struct InvalidInputError : std::invalid_argument {
  explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Rank-deficient normal equations at lambda = 0 with the pseudoinverse
/// fallback disabled.
struct SingularSystemError : std::runtime_error {
  explicit SingularSystemError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative routine hit its iteration cap before reaching tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mrdkit
