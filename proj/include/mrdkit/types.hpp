#pragma once

#include <Eigen/Dense>

#include <string>

#include "mrdkit/errors.hpp"

namespace mrdkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Columns are samples: an m x n SampleMatrix holds n points in R^m.
using SampleMatrix = Eigen::MatrixXd;

inline void check_sample_matrix(const SampleMatrix& X, const char* name) {
  if (X.rows() < 1 || X.cols() < 1)
    throw InvalidInputError(std::string(name) + ": matrix must be nonempty");
  if (!X.allFinite())
    throw InvalidInputError(std::string(name) + ": matrix has non-finite entries");
}

inline void check_same_dimension(const SampleMatrix& X1, const SampleMatrix& X2) {
  if (X1.rows() != X2.rows())
    throw InvalidInputError("sample sets have different feature dimensions: " +
                            std::to_string(X1.rows()) + " vs " + std::to_string(X2.rows()));
}

}  // namespace mrdkit
