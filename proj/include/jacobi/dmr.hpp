#pragma once

#include <cstddef>
#include <vector>

#include "jacobi/glm.hpp"

namespace jacobi {

/// n x K table of non-negative integer category counts (stored as doubles).
struct CountTable {
  Matrix counts;

  Eigen::Index rows() const { return counts.rows(); }
  Eigen::Index classes() const { return counts.cols(); }
  Vector totals() const { return counts.rowwise().sum(); }

  /// Throws InvalidResponse on negative / non-integer counts or K < 2.
  void validate() const;

  /// One-hot table with m_i = 1 for single-label data.
  static CountTable from_labels(const std::vector<int>& labels, int num_classes);
};

struct DmrModel {
  Matrix betas;  // p x K, column k for class k
  JacobiHyper hyper;
};

/// K independent Jacobi-Poisson fits sharing the design.
DmrModel fit_dmr(const Matrix& X, const CountTable& Y, const JacobiHyper& hyper,
                 std::size_t threads = 1);

/// Row-wise softmax of X0 * betas.
Matrix predict_proba(const DmrModel& model, const Matrix& X0);

/// Row-wise softmax of a latent matrix (max-shifted).
Matrix softmax_rows(const Matrix& latent);

/// Argmax per row, ties to the lowest index.
std::vector<int> argmax_rows(const Matrix& scores);

std::vector<int> predict_class(const DmrModel& model, const Matrix& X0);

}  // namespace jacobi
