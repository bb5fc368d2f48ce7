#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jacobi/dmr.hpp"
#include "jacobi/numkit.hpp"

namespace jacobi {

/// Design matrix plus response. `counts` is set for multiclass data (then
/// `y` holds the label index of each row); `disbursement` carries the
/// per-row amount V used by the loan utility.
struct Dataset {
  Matrix X;
  Vector y;
  std::optional<CountTable> counts;
  std::optional<Vector> disbursement;
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index features() const { return X.cols(); }
};

}  // namespace jacobi
