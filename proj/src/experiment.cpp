#include "jacobi/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "jacobi/dmr.hpp"
#include "jacobi/mle.hpp"
#include "jacobi/parallel.hpp"
#include "jacobi/simlab.hpp"

namespace jacobi {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Logistic: return "logistic";
    case ExperimentKind::Poisson: return "poisson";
    case ExperimentKind::Multinomial: return "multinomial";
  }
  return "?";
}

std::string to_string(ContaminationKind kind) {
  switch (kind) {
    case ContaminationKind::None: return "none";
    case ContaminationKind::FlipLabels: return "flip";
    case ContaminationKind::PoissonReplace: return "poisson";
  }
  return "?";
}

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::ConfigError, path + ": " + message);
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) config_error(path, "expected a number");
  return j.get<double>();
}

std::size_t count_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) config_error(path, "expected a non-negative integer");
  const auto v = j.get<long long>();
  if (v < 0) config_error(path, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) config_error(path, "expected a string");
  return j.get<std::string>();
}

}  // namespace

void SimConfig::validate() const {
  if (replications == 0) config_error("/replications", "must be >= 1");
  if (bootstrap == 0) config_error("/bootstrap", "must be >= 1");
  if (kind == ExperimentKind::Multinomial) {
    if (num_classes < 2) config_error("/classes", "must be >= 2");
    if (n <= num_features + 1) config_error("/n", "must exceed the number of coefficients");
  } else {
    if (beta0.size() == 0) config_error("/beta0", "must be non-empty");
    if (n <= static_cast<std::size_t>(beta0.size())) config_error("/n", "must exceed p");
    if (!(sigma > 0.0)) config_error("/sigma", "must be positive");
    if (!(rho_corr >= 0.0 && rho_corr < 1.0)) config_error("/rho", "must lie in [0, 1)");
  }
  if (contamination.kind != ContaminationKind::None &&
      !(contamination.fraction >= 0.0 && contamination.fraction <= 1.0)) {
    config_error("/contamination/fraction", "must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const auto& m = methods[i];
    const bool ok = kind == ExperimentKind::Logistic
                        ? (m == "jacobi-logit" || m == "jacobi-probit" || m == "mle-logit")
                    : kind == ExperimentKind::Poisson ? (m == "jacobi-poisson" || m == "mle-poisson")
                                                      : m == "jacobi-dmr";
    if (!ok) config_error("/methods/" + std::to_string(i), "method '" + m + "' does not apply to this experiment");
  }
}

std::vector<std::string> SimConfig::effective_methods() const {
  if (!methods.empty()) return methods;
  switch (kind) {
    case ExperimentKind::Logistic: return {"jacobi-logit", "jacobi-probit", "mle-logit"};
    case ExperimentKind::Poisson: return {"jacobi-poisson", "mle-poisson"};
    case ExperimentKind::Multinomial: return {"jacobi-dmr"};
  }
  return {};
}

SimConfig SimConfig::preset(const std::string& name) {
  SimConfig c;
  c.name = name;
  if (name == "exp1" || name == "exp6") {
    c.kind = ExperimentKind::Logistic;
    c.beta0 = (Vector(8) << 3, 1.5, 0, 0, 2, 0, 0, 0).finished();
    c.sigma = 3.0;
    if (name == "exp6") c.contamination = {ContaminationKind::FlipLabels, 0.1, 0.0};
  } else if (name == "exp3" || name == "exp7") {
    c.kind = ExperimentKind::Poisson;
    c.beta0 = (Vector(8) << 0.3, 0.15, 0, 0, 0.2, 0, 0, 0).finished();
    c.sigma = 1.0;
    if (name == "exp7") c.contamination = {ContaminationKind::PoissonReplace, 0.1, 20.0};
  } else if (name == "exp4") {
    c.kind = ExperimentKind::Multinomial;
    c.n = 50;
    c.replications = 100;
    c.num_classes = 4;
    c.num_features = 3;
  } else {
    throw Error(ErrorKind::ConfigError, "unknown preset '" + name + "' (expected exp1, exp3, exp4, exp6, exp7)");
  }
  c.p = static_cast<std::size_t>(c.beta0.size());
  return c;
}

SimConfig parse_sim_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("/", "expected an object");

  SimConfig c;
  if (const auto* preset = find(j, "preset")) c = SimConfig::preset(string_at(*preset, "/preset"));
  if (const auto* v = find(j, "name")) c.name = string_at(*v, "/name");
  if (const auto* v = find(j, "kind")) {
    const auto kind = string_at(*v, "/kind");
    if (kind == "logistic") c.kind = ExperimentKind::Logistic;
    else if (kind == "poisson") c.kind = ExperimentKind::Poisson;
    else if (kind == "multinomial") c.kind = ExperimentKind::Multinomial;
    else config_error("/kind", "expected logistic, poisson or multinomial");
  }
  if (const auto* v = find(j, "n")) c.n = count_at(*v, "/n");
  if (const auto* v = find(j, "replications")) c.replications = count_at(*v, "/replications");
  if (const auto* v = find(j, "beta0")) {
    if (!v->is_array()) config_error("/beta0", "expected an array of numbers");
    c.beta0.resize(static_cast<Eigen::Index>(v->size()));
    for (std::size_t i = 0; i < v->size(); ++i) {
      c.beta0[static_cast<Eigen::Index>(i)] = number_at((*v)[i], "/beta0/" + std::to_string(i));
    }
    c.p = v->size();
  }
  if (const auto* v = find(j, "sigma")) c.sigma = number_at(*v, "/sigma");
  if (const auto* v = find(j, "rho")) c.rho_corr = number_at(*v, "/rho");
  if (const auto* v = find(j, "classes")) c.num_classes = count_at(*v, "/classes");
  if (const auto* v = find(j, "features")) c.num_features = count_at(*v, "/features");
  if (const auto* v = find(j, "mean_total")) c.mean_total = number_at(*v, "/mean_total");
  if (const auto* v = find(j, "bootstrap")) c.bootstrap = count_at(*v, "/bootstrap");
  if (const auto* v = find(j, "contamination")) {
    if (!v->is_object()) config_error("/contamination", "expected an object");
    const auto kind = string_at(v->value("kind", json("none")), "/contamination/kind");
    if (kind == "none") c.contamination.kind = ContaminationKind::None;
    else if (kind == "flip") c.contamination.kind = ContaminationKind::FlipLabels;
    else if (kind == "poisson") c.contamination.kind = ContaminationKind::PoissonReplace;
    else config_error("/contamination/kind", "expected none, flip or poisson");
    if (const auto* f = find(*v, "fraction")) c.contamination.fraction = number_at(*f, "/contamination/fraction");
    if (const auto* l = find(*v, "lambda")) c.contamination.lambda = number_at(*l, "/contamination/lambda");
  }
  if (const auto* v = find(j, "hyper")) {
    if (!v->is_object()) config_error("/hyper", "expected an object");
    JacobiHyper h;
    if (const auto* a = find(*v, "a")) h.a = number_at(*a, "/hyper/a");
    if (const auto* b = find(*v, "b")) h.b = number_at(*b, "/hyper/b");
    if (const auto* s = find(*v, "schedule")) {
      try {
        h.schedule = parse_schedule(string_at(*s, "/hyper/schedule"));
      } catch (const Error&) {
        config_error("/hyper/schedule", "expected fixed or one-over-n");
      }
    }
    c.hyper = h;
  }
  if (const auto* v = find(j, "methods")) {
    if (!v->is_array()) config_error("/methods", "expected an array of strings");
    c.methods.clear();
    for (std::size_t i = 0; i < v->size(); ++i) c.methods.push_back(string_at((*v)[i], "/methods/" + std::to_string(i)));
  }
  if (const auto* v = find(j, "seed")) {
    if (v->is_object()) {
      if (const auto* r = find(*v, "root")) c.seed.root_seed = count_at(*r, "/seed/root");
      if (const auto* s = find(*v, "stream")) c.seed.stream_id = count_at(*s, "/seed/stream");
    } else {
      c.seed.root_seed = count_at(*v, "/seed");
    }
  }
  c.validate();
  return c;
}

std::string sim_config_to_json(const SimConfig& c) {
  json j;
  j["name"] = c.name;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["replications"] = c.replications;
  if (c.kind == ExperimentKind::Multinomial) {
    j["classes"] = c.num_classes;
    j["features"] = c.num_features;
    j["mean_total"] = c.mean_total;
  } else {
    j["beta0"] = std::vector<double>(c.beta0.begin(), c.beta0.end());
    j["sigma"] = c.sigma;
    j["rho"] = c.rho_corr;
  }
  j["contamination"] = {{"kind", to_string(c.contamination.kind)},
                        {"fraction", c.contamination.fraction},
                        {"lambda", c.contamination.lambda}};
  if (c.hyper) {
    j["hyper"] = {{"a", c.hyper->a}, {"b", c.hyper->b}, {"schedule", std::string(to_string(c.hyper->schedule))}};
  }
  j["methods"] = c.effective_methods();
  j["bootstrap"] = c.bootstrap;
  j["seed"] = {{"root", c.seed.root_seed}, {"stream", c.seed.stream_id}};
  return j.dump(2);
}

const ReportRow& ExperimentReport::row(const std::string& method) const {
  for (const auto& r : rows)
    if (r.method == method) return r;
  throw Error(ErrorKind::ConfigError, "report has no row for method '" + method + "'");
}

namespace {

// Replication-level data: training set, fresh evaluation set, true coefficients.
struct Replicate {
  Dataset train;
  Dataset holdout;
  Matrix beta0;
};

Vector contaminate(const Vector& y, const Contamination& c, RandomStream& rng) {
  switch (c.kind) {
    case ContaminationKind::None: return y;
    case ContaminationKind::FlipLabels: return contaminate_flip(y, c.fraction, rng);
    case ContaminationKind::PoissonReplace: return contaminate_poisson(y, c.fraction, c.lambda, rng);
  }
  return y;
}

Replicate make_replicate(const SimConfig& c, std::size_t r) {
  RandomStream train_rng = derive_rng(c.seed, r, 0);
  RandomStream holdout_rng = derive_rng(c.seed, r, 1);
  Replicate rep;
  switch (c.kind) {
    case ExperimentKind::Logistic: {
      rep.train = gen_logistic(c.n, c.beta0, c.sigma, c.rho_corr, train_rng).data;
      rep.holdout = gen_logistic(c.n, c.beta0, c.sigma, c.rho_corr, holdout_rng).data;
      rep.beta0 = c.beta0;
      break;
    }
    case ExperimentKind::Poisson: {
      rep.train = gen_poisson(c.n, c.beta0, c.sigma, c.rho_corr, train_rng).data;
      rep.holdout = gen_poisson(c.n, c.beta0, c.sigma, c.rho_corr, holdout_rng).data;
      rep.beta0 = c.beta0;
      break;
    }
    case ExperimentKind::Multinomial: {
      auto g = gen_dmr(c.n, c.num_features, c.num_classes, train_rng, c.mean_total);
      rep.holdout = gen_dmr_data(c.n, g.beta0, holdout_rng, c.mean_total).data;
      rep.train = std::move(g.data);
      rep.beta0 = std::move(g.beta0);
      break;
    }
  }
  if (c.contamination.kind != ContaminationKind::None) {
    RandomStream train_noise = derive_rng(c.seed, r, 2);
    RandomStream holdout_noise = derive_rng(c.seed, r, 3);
    rep.train.y = contaminate(rep.train.y, c.contamination, train_noise);
    rep.holdout.y = contaminate(rep.holdout.y, c.contamination, holdout_noise);
  }
  return rep;
}

struct Outcome {
  double rmse_y = kNaN;
  double rmse_y_holdout = kNaN;
  double rmse_y_decoupled = kNaN;
  double rmse_beta = kNaN;
  double micros = kNaN;
};

template <typename Fit>
double time_fit(Fit&& fit) {
  const auto start = std::chrono::steady_clock::now();
  fit();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::micro>(stop - start).count();
}

Outcome run_method(const SimConfig& c, const std::string& method, const Replicate& rep) {
  Outcome o;
  if (method == "jacobi-dmr") {
    const JacobiHyper hyper = c.hyper.value_or(JacobiHyper::defaults(Family::Poisson));
    DmrModel model;
    o.micros = time_fit([&] { model = fit_dmr(rep.train.X, *rep.train.counts, hyper); });
    o.rmse_y = proportion_rmse(*rep.train.counts, predict_proba(model, rep.train.X));
    o.rmse_y_holdout = proportion_rmse(*rep.holdout.counts, predict_proba(model, rep.holdout.X));
    o.rmse_y_decoupled = proportion_rmse(*rep.train.counts, predict_proba(model, rep.holdout.X));
    o.rmse_beta = beta_rmse(model.betas, rep.beta0);
    return o;
  }
  const bool is_mle = method.starts_with("mle-");
  const Family family = parse_family(method.substr(method.find('-') + 1));
  Vector beta;
  if (is_mle) {
    o.micros = time_fit([&] { beta = fit_mle(rep.train.X, rep.train.y, family).beta; });
  } else {
    const JacobiHyper hyper = c.hyper.value_or(JacobiHyper::defaults(family));
    o.micros = time_fit([&] { beta = fit_jacobi(rep.train.X, rep.train.y, family, hyper).beta; });
  }
  o.rmse_y = surrogate_rmse(rep.train.y, predict_with(beta, family, rep.train.X));
  const Vector holdout_pred = predict_with(beta, family, rep.holdout.X);
  o.rmse_y_holdout = surrogate_rmse(rep.holdout.y, holdout_pred);
  o.rmse_y_decoupled = surrogate_rmse(rep.train.y, holdout_pred);
  o.rmse_beta = beta_rmse(beta, rep.beta0);
  return o;
}

std::vector<double> finite_only(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v)
    if (std::isfinite(x)) out.push_back(x);
  return out;
}

MetricSummary summarize_metric(const std::vector<double>& values, std::size_t B, const SeedSpec& seed,
                               std::size_t method_index, std::size_t metric_index) {
  const auto ok = finite_only(values);
  MetricSummary s{kNaN, kNaN};
  if (ok.empty()) return s;
  s.median = median(ok);
  if (ok.size() >= 2) {
    const SeedSpec boot{seed.root_seed, seed.stream_id ^ 0xB0075712ULL};
    RandomStream rng = derive_rng(boot, method_index, metric_index);
    s.se = bootstrap_median_se(ok, B, rng);
  } else {
    s.se = 0.0;
  }
  return s;
}

}  // namespace

ExperimentReport run_experiment(const SimConfig& config, std::size_t threads) {
  config.validate();
  const auto methods = config.effective_methods();
  const std::size_t R = config.replications;
  std::vector<std::vector<Outcome>> outcomes(R, std::vector<Outcome>(methods.size()));
  std::vector<std::vector<bool>> failed(R, std::vector<bool>(methods.size(), false));

  parallel_for(R, threads, [&](std::size_t r) {
    const Replicate rep = make_replicate(config, r);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      try {
        outcomes[r][m] = run_method(config, methods[m], rep);
      } catch (const Error&) {
        outcomes[r][m] = Outcome{};
        failed[r][m] = true;
      }
    }
  });

  ExperimentReport report;
  report.config = config;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    MethodSamples s;
    s.method = methods[m];
    for (std::size_t r = 0; r < R; ++r) {
      const auto& o = outcomes[r][m];
      s.rmse_y.push_back(o.rmse_y);
      s.rmse_y_holdout.push_back(o.rmse_y_holdout);
      s.rmse_y_decoupled.push_back(o.rmse_y_decoupled);
      s.rmse_beta.push_back(o.rmse_beta);
      s.micros.push_back(o.micros);
      if (failed[r][m]) ++s.failures;
    }
    ReportRow row;
    row.method = s.method;
    row.failures = s.failures;
    row.succeeded = R - s.failures;
    row.rmse_y = summarize_metric(s.rmse_y, config.bootstrap, config.seed, m, 0);
    row.rmse_y_holdout = summarize_metric(s.rmse_y_holdout, config.bootstrap, config.seed, m, 1);
    row.rmse_y_decoupled = summarize_metric(s.rmse_y_decoupled, config.bootstrap, config.seed, m, 2);
    row.rmse_beta = summarize_metric(s.rmse_beta, config.bootstrap, config.seed, m, 3);
    const auto betas = finite_only(s.rmse_beta);
    if (betas.size() >= 2) {
      double mean = 0.0;
      for (double v : betas) mean += v;
      mean /= static_cast<double>(betas.size());
      double ss = 0.0;
      for (double v : betas) ss += (v - mean) * (v - mean);
      row.beta_rmse_sd = std::sqrt(ss / static_cast<double>(betas.size() - 1));
    }
    const auto times = finite_only(s.micros);
    row.time_us = times.empty() ? kNaN : median(times);
    report.rows.push_back(row);
    report.samples.push_back(std::move(s));
  }
  double reference = kNaN;
  for (const auto& row : report.rows) {
    if (row.method.starts_with("jacobi-")) {
      reference = row.time_us;
      break;
    }
  }
  for (auto& row : report.rows) row.time_multiple = row.time_us / reference;
  return report;
}

std::string report_to_csv(const ExperimentReport& report, bool include_timing) {
  std::ostringstream out;
  out << "method,succeeded,failures,rmse_y,rmse_y_se,rmse_y_holdout,rmse_y_holdout_se,"
         "rmse_y_decoupled,rmse_y_decoupled_se,rmse_beta,rmse_beta_se,rmse_beta_sd";
  if (include_timing) out << ",time_us,time_multiple";
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.method << ',' << r.succeeded << ',' << r.failures << ',' << fixed(r.rmse_y.median) << ','
        << fixed(r.rmse_y.se) << ',' << fixed(r.rmse_y_holdout.median) << ',' << fixed(r.rmse_y_holdout.se) << ','
        << fixed(r.rmse_y_decoupled.median) << ',' << fixed(r.rmse_y_decoupled.se) << ','
        << fixed(r.rmse_beta.median) << ',' << fixed(r.rmse_beta.se) << ',' << fixed(r.beta_rmse_sd);
    if (include_timing) out << ',' << fixed(r.time_us, 2) << ',' << fixed(r.time_multiple, 2);
    out << '\n';
  }
  return out.str();
}

std::string report_to_table(const ExperimentReport& report) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %7s %8s %6s %8s %6s %8s %6s %8s %6s %10s %8s\n", "method", "ok",
                "RMSE(y)", "SE", "holdout", "SE", "decoupl", "SE", "RMSE(b)", "SE", "time(us)", "multiple");
  out << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-16s %7zu %8.4f %6.4f %8.4f %6.4f %8.4f %6.4f %8.4f %6.4f %10.2f %8.2f\n",
                  r.method.c_str(), r.succeeded, r.rmse_y.median, r.rmse_y.se, r.rmse_y_holdout.median,
                  r.rmse_y_holdout.se, r.rmse_y_decoupled.median, r.rmse_y_decoupled.se, r.rmse_beta.median,
                  r.rmse_beta.se, r.time_us, r.time_multiple);
    out << line;
  }
  return out.str();
}

std::vector<ConsistencyRow> run_consistency(const SimConfig& base, const std::vector<std::size_t>& sizes,
                                            std::size_t threads) {
  std::vector<ConsistencyRow> rows;
  for (const std::size_t n : sizes) {
    for (const auto& hyper : {JacobiHyper{0.5, 0.5, Schedule::Fixed}, JacobiHyper::one_over_n()}) {
      SimConfig c = base;
      c.n = n;
      c.kind = ExperimentKind::Logistic;
      c.methods = {"jacobi-logit"};
      c.hyper = hyper;
      const auto report = run_experiment(c, threads);
      rows.push_back({n, std::string(to_string(hyper.schedule)), report.rows.front().rmse_beta});
    }
  }
  return rows;
}

std::string consistency_to_csv(const std::vector<ConsistencyRow>& rows) {
  std::ostringstream out;
  out << "n,schedule,rmse_beta,rmse_beta_se\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.schedule << ',' << fixed(r.rmse_beta.median) << ',' << fixed(r.rmse_beta.se) << '\n';
  }
  return out.str();
}

}  // namespace jacobi
