#include "jacobi/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jacobi {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

double parse_exact(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw Error(ErrorKind::SchemaMismatch, path + ": expected a decimal string");
  const auto& s = j.get_ref<const std::string&>();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::SchemaMismatch, path + ": not a number: '" + s + "'");
  }
  return value;
}

const json& field(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::SchemaMismatch, std::string("model file lacks '") + key + "'");
  return *it;
}

std::vector<std::string> strings(const json& j, const char* key) {
  std::vector<std::string> out;
  for (const auto& v : field(j, key)) {
    if (!v.is_string()) throw Error(ErrorKind::SchemaMismatch, std::string("/") + key + ": expected strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

std::string format_exact(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ModelFile ModelFile::from_glm(const FittedGLM& fit, std::vector<std::string> feature_names) {
  if (feature_names.size() != static_cast<std::size_t>(fit.beta.size())) {
    throw Error(ErrorKind::DimensionMismatch, "feature names do not match the coefficient count");
  }
  ModelFile m;
  m.kind = Kind::Glm;
  m.family = fit.family;
  m.hyper = fit.hyper;
  m.shapes = fit.shapes;
  m.beta = fit.beta;
  m.feature_names = std::move(feature_names);
  m.n_train = fit.n_train;
  return m;
}

ModelFile ModelFile::from_dmr(const DmrModel& model, std::size_t n_train, std::vector<std::string> feature_names,
                              std::vector<std::string> class_labels) {
  if (feature_names.size() != static_cast<std::size_t>(model.betas.rows()) ||
      class_labels.size() != static_cast<std::size_t>(model.betas.cols())) {
    throw Error(ErrorKind::DimensionMismatch, "names do not match the coefficient matrix");
  }
  ModelFile m;
  m.kind = Kind::Multiclass;
  m.family = Family::Poisson;
  m.hyper = model.hyper;
  m.shapes = model.hyper.resolve(n_train);
  m.beta = model.betas;
  m.feature_names = std::move(feature_names);
  m.class_labels = std::move(class_labels);
  m.n_train = n_train;
  return m;
}

Matrix ModelFile::predict(const Matrix& X0) const {
  if (X0.cols() != beta.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "design has " + std::to_string(X0.cols()) + " columns, model expects " +
                                                  std::to_string(beta.rows()));
  }
  if (kind == Kind::Multiclass) return predict_proba(DmrModel{beta, hyper}, X0);
  return predict_with(beta.col(0), family, X0);
}

std::string model_to_json(const ModelFile& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = m.kind == ModelFile::Kind::Glm ? "glm" : "multiclass";
  j["family"] = std::string(to_string(m.family));
  j["hyper"] = {{"schedule", std::string(to_string(m.hyper.schedule))},
                {"a", format_exact(m.shapes.a)},
                {"b", format_exact(m.shapes.b)}};
  j["n_train"] = m.n_train;
  j["features"] = m.feature_names;
  if (m.kind == ModelFile::Kind::Multiclass) j["classes"] = m.class_labels;
  json beta = json::array();
  for (Eigen::Index k = 0; k < m.beta.cols(); ++k) {
    json column = json::array();
    for (Eigen::Index i = 0; i < m.beta.rows(); ++i) column.push_back(format_exact(m.beta(i, k)));
    beta.push_back(std::move(column));
  }
  j["beta"] = m.kind == ModelFile::Kind::Glm ? beta[0] : beta;
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("model file is not valid JSON: ") + e.what());
  }
  if (field(j, "format_version") != kFormatVersion) {
    throw Error(ErrorKind::SchemaMismatch, "unsupported model format version");
  }
  ModelFile m;
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "glm") m.kind = ModelFile::Kind::Glm;
  else if (kind == "multiclass") m.kind = ModelFile::Kind::Multiclass;
  else throw Error(ErrorKind::SchemaMismatch, "/kind: unknown model kind '" + kind + "'");
  m.family = parse_family(field(j, "family").get<std::string>());
  const auto& hyper = field(j, "hyper");
  m.hyper.schedule = parse_schedule(field(hyper, "schedule").get<std::string>());
  m.shapes.a = parse_exact(field(hyper, "a"), "/hyper/a");
  m.shapes.b = parse_exact(field(hyper, "b"), "/hyper/b");
  m.hyper.a = m.shapes.a;
  m.hyper.b = m.shapes.b;
  m.n_train = field(j, "n_train").get<std::size_t>();
  m.feature_names = strings(j, "features");
  const auto p = static_cast<Eigen::Index>(m.feature_names.size());
  const auto& beta = field(j, "beta");
  if (m.kind == ModelFile::Kind::Glm) {
    if (!beta.is_array() || static_cast<Eigen::Index>(beta.size()) != p) {
      throw Error(ErrorKind::SchemaMismatch, "/beta: expected one value per feature");
    }
    m.beta.resize(p, 1);
    for (Eigen::Index i = 0; i < p; ++i) {
      m.beta(i, 0) = parse_exact(beta[static_cast<std::size_t>(i)], "/beta/" + std::to_string(i));
    }
  } else {
    m.class_labels = strings(j, "classes");
    const auto K = static_cast<Eigen::Index>(m.class_labels.size());
    if (!beta.is_array() || static_cast<Eigen::Index>(beta.size()) != K) {
      throw Error(ErrorKind::SchemaMismatch, "/beta: expected one column per class");
    }
    m.beta.resize(p, K);
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto& column = beta[static_cast<std::size_t>(k)];
      if (!column.is_array() || static_cast<Eigen::Index>(column.size()) != p) {
        throw Error(ErrorKind::SchemaMismatch, "/beta/" + std::to_string(k) + ": expected one value per feature");
      }
      for (Eigen::Index i = 0; i < p; ++i) {
        m.beta(i, k) = parse_exact(column[static_cast<std::size_t>(i)],
                                   "/beta/" + std::to_string(k) + "/" + std::to_string(i));
      }
    }
  }
  return m;
}

void save_model(const ModelFile& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  out << model_to_json(model);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace jacobi
