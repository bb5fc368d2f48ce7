#include "jacobi/dmr.hpp"

#include <cmath>
#include <string>

#include "jacobi/parallel.hpp"

namespace jacobi {

void CountTable::validate() const {
  if (counts.cols() < 2) throw Error(ErrorKind::InvalidResponse, "count table needs K >= 2 classes");
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    for (Eigen::Index k = 0; k < counts.cols(); ++k) {
      const double v = counts(i, k);
      if (!(v >= 0.0) || v != std::floor(v) || !std::isfinite(v)) {
        throw Error(ErrorKind::InvalidResponse,
                    "count at row " + std::to_string(i) + ", class " + std::to_string(k) +
                        " is not a non-negative integer");
      }
    }
  }
}

CountTable CountTable::from_labels(const std::vector<int>& labels, int num_classes) {
  CountTable table{Matrix::Zero(static_cast<Eigen::Index>(labels.size()), num_classes)};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw Error(ErrorKind::InvalidResponse,
                  "label " + std::to_string(labels[i]) + " at row " + std::to_string(i) + " out of range");
    }
    table.counts(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  }
  return table;
}

DmrModel fit_dmr(const Matrix& X, const CountTable& Y, const JacobiHyper& hyper, std::size_t threads) {
  Y.validate();
  if (X.rows() != Y.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "design rows and count-table rows differ");
  }
  const LeastSquaresProjector projector(X);
  DmrModel model{Matrix(X.cols(), Y.classes()), hyper};
  parallel_for(static_cast<std::size_t>(Y.classes()), threads, [&](std::size_t k) {
    const auto col = static_cast<Eigen::Index>(k);
    const Vector eta = latent_vector(Y.counts.col(col), Family::Poisson, hyper);
    model.betas.col(col) = projector.solve(eta);
  });
  return model;
}

Matrix softmax_rows(const Matrix& latent) {
  Matrix probs(latent.rows(), latent.cols());
  for (Eigen::Index i = 0; i < latent.rows(); ++i) {
    const auto row = latent.row(i);
    const double shift = row.maxCoeff();
    probs.row(i) = (row.array() - shift).exp().matrix();
    probs.row(i) /= probs.row(i).sum();
  }
  return probs;
}

Matrix predict_proba(const DmrModel& model, const Matrix& X0) {
  if (X0.cols() != model.betas.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "prediction design has " + std::to_string(X0.cols()) + " columns, model has " +
                    std::to_string(model.betas.rows()));
  }
  return softmax_rows(X0 * model.betas);
}

std::vector<int> argmax_rows(const Matrix& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k) {
      if (scores(i, k) > scores(i, best)) best = k;
    }
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

std::vector<int> predict_class(const DmrModel& model, const Matrix& X0) {
  // Softmax is monotone within a row; argmax of the latent matrix is the same
  // decision without rounding ties introduced by exp.
  if (X0.cols() != model.betas.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "prediction design column mismatch");
  }
  return argmax_rows(X0 * model.betas);
}

}  // namespace jacobi
