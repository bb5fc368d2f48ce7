#pragma once

#include <string>
#include <vector>

#include "jacobi/dmr.hpp"
#include "jacobi/glm.hpp"

namespace jacobi {

/// A persisted fit: a single-response GLM (beta is p x 1) or a multiclass
/// DMR model (beta is p x K with one label per column).
struct ModelFile {
  enum class Kind { Glm, Multiclass };

  Kind kind = Kind::Glm;
  Family family = Family::Logit;  // Poisson for multiclass
  JacobiHyper hyper;
  Shapes shapes{};
  Matrix beta;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_labels;
  std::size_t n_train = 0;

  static ModelFile from_glm(const FittedGLM& fit, std::vector<std::string> feature_names);
  static ModelFile from_dmr(const DmrModel& model, std::size_t n_train, std::vector<std::string> feature_names,
                            std::vector<std::string> class_labels);

  /// Probabilities (binary), rates (poisson), or class probabilities (multiclass).
  Matrix predict(const Matrix& X0) const;
};

/// JSON with every binary64 value written as a 17-significant-digit decimal
/// string, so loading reproduces the fitted values bit for bit.
std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);

void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

std::string format_exact(double value);

}  // namespace jacobi
