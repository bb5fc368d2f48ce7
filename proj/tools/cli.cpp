#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "jacobi/csv.hpp"
#include "jacobi/dmr.hpp"
#include "jacobi/experiment.hpp"
#include "jacobi/hyper.hpp"
#include "jacobi/model_io.hpp"
#include "jacobi/partition.hpp"
#include "jacobi/simlab.hpp"
#include "jacobi/uncertainty.hpp"

namespace jacobi::cli {

namespace {

struct Global {
  std::uint64_t seed = 20240611;
  std::size_t threads = 1;
  std::string format = "csv";
};

struct DataArgs {
  std::string path;
  std::string target;
  std::string classes;
  std::string disbursement;
  std::vector<std::string> features;
  bool intercept = false;

  CsvSchema schema() const {
    CsvSchema s;
    s.target = target;
    if (!classes.empty()) s.classes = classes;
    if (!disbursement.empty()) s.disbursement = disbursement;
    s.features = features;
    s.intercept = intercept;
    return s;
  }
};

struct HyperArgs {
  std::optional<double> a;
  std::optional<double> b;
  std::string schedule = "fixed";

  JacobiHyper resolve(Family family) const {
    JacobiHyper h = JacobiHyper::defaults(family);
    h.schedule = parse_schedule(schedule);
    if (a) h.a = *a;
    if (b) h.b = *b;
    return h;
  }
};

const std::vector<std::string> kFamilies{"logit", "probit", "poisson"};

void add_data_options(CLI::App* cmd, DataArgs& d, const std::string& flag = "--data") {
  cmd->add_option(flag, d.path, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  cmd->add_option("--target", d.target, "response column");
  cmd->add_option("--classes", d.classes, "multiclass label column");
  cmd->add_option("--disbursement", d.disbursement, "loan amount column for the utility objective");
  cmd->add_option("--features", d.features, "feature columns (default: all other columns)")->delimiter(',');
  cmd->add_flag("--intercept", d.intercept, "prepend a column of ones");
}

void add_hyper_options(CLI::App* cmd, HyperArgs& h) {
  cmd->add_option("--a", h.a, "prior shape a");
  cmd->add_option("--b", h.b, "prior shape b");
  cmd->add_option("--schedule", h.schedule, "fixed or one-over-n")
      ->check(CLI::IsMember({"fixed", "one-over-n", "one_over_n"}));
}

void print_matrix(std::ostream& out, const Global& g, const std::vector<std::string>& header,
                  const std::vector<std::string>& row_names, const Matrix& values) {
  if (g.format == "csv") {
    out << "name";
    for (const auto& h : header) out << ',' << h;
    out << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      out << row_names[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < values.cols(); ++j) out << ',' << format_exact(values(i, j));
      out << '\n';
    }
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-16s", "name");
  out << buf;
  for (const auto& h : header) {
    std::snprintf(buf, sizeof buf, " %12s", h.c_str());
    out << buf;
  }
  out << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    std::snprintf(buf, sizeof buf, "%-16s", row_names[static_cast<std::size_t>(i)].c_str());
    out << buf;
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " %12.6f", values(i, j));
      out << buf;
    }
    out << '\n';
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
  f << text;
}

std::string read_text(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << f.rdbuf();
  return buffer.str();
}

// fit ----------------------------------------------------------------------

struct FitArgs {
  DataArgs data;
  HyperArgs hyper;
  std::string family = "logit";
  std::string model_out;
};

int cmd_fit(const FitArgs& args, const Global& g, std::ostream& out) {
  const CsvDataset ds = to_dataset(read_csv_file(args.data.path), args.data.schema());
  ModelFile model;
  if (ds.data.counts) {
    const JacobiHyper hyper = args.hyper.resolve(Family::Poisson);
    const DmrModel dmr = fit_dmr(ds.data.X, *ds.data.counts, hyper, g.threads);
    model = ModelFile::from_dmr(dmr, static_cast<std::size_t>(ds.data.X.rows()), ds.data.feature_names,
                                ds.class_labels);
  } else {
    if (args.data.target.empty()) throw Error(ErrorKind::ConfigError, "--target or --classes is required");
    const Family family = parse_family(args.family);
    const FittedGLM fit = fit_jacobi(ds.data.X, ds.data.y, family, args.hyper.resolve(family));
    model = ModelFile::from_glm(fit, ds.data.feature_names);
  }
  save_model(model, args.model_out);
  std::vector<std::string> header;
  if (model.kind == ModelFile::Kind::Multiclass) {
    for (const auto& label : model.class_labels) header.push_back("beta_" + label);
  } else {
    header.push_back("beta");
  }
  print_matrix(out, g, header, model.feature_names, model.beta);
  return kOk;
}

// predict ------------------------------------------------------------------

struct PredictArgs {
  std::string model;
  std::string data;
  std::string out;
};

int cmd_predict(const PredictArgs& args, std::ostream& out) {
  const ModelFile model = load_model(args.model);
  const CsvTable table = read_csv_file(args.data);
  const Matrix X = design_from(table, model.feature_names);
  const Matrix pred = model.predict(X);

  std::vector<std::string> header;
  Matrix values = pred;
  if (model.kind == ModelFile::Kind::Multiclass) {
    for (const auto& label : model.class_labels) header.push_back("p_" + label);
    header.push_back("class");
    const auto cls = argmax_rows(pred);
    values.conservativeResize(Eigen::NoChange, pred.cols() + 1);
    for (Eigen::Index i = 0; i < pred.rows(); ++i) values(i, pred.cols()) = cls[static_cast<std::size_t>(i)];
  } else {
    header.push_back(model.family == Family::Poisson ? "rate" : "probability");
  }

  if (args.out.empty()) {
    write_csv(out, header, values);
  } else {
    std::ofstream f(args.out);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + args.out + "'");
    write_csv(f, header, values);
  }
  return kOk;
}

// experiment ---------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::optional<std::size_t> replications;
  std::optional<std::size_t> bootstrap;
  std::vector<std::size_t> sizes{200, 500, 1000, 2000, 5000};
  std::string out_dir;
  bool strict = false;
  bool timing = true;
};

int cmd_experiment(const ExperimentArgs& args, const Global& g, std::ostream& out, const CLI::App* app) {
  if (args.config.empty() == args.preset.empty()) {
    throw CLI::ValidationError("experiment", "exactly one of --config or --preset is required");
  }
  const bool consistency = args.preset == "exp2";
  SimConfig config;
  if (!args.config.empty()) {
    config = parse_sim_config(read_text(args.config));
  } else {
    config = SimConfig::preset(consistency ? "exp1" : args.preset);
    config.name = args.preset;
  }
  if (args.config.empty() || app->count("--seed") > 0) config.seed.root_seed = g.seed;
  if (args.replications) config.replications = *args.replications;
  if (args.bootstrap) config.bootstrap = *args.bootstrap;
  config.validate();

  std::string text;
  if (consistency) {
    const auto rows = run_consistency(config, args.sizes, g.threads);
    text = consistency_to_csv(rows);
    out << text;
  } else {
    const ExperimentReport report = run_experiment(config, g.threads);
    text = report_to_csv(report, args.timing);
    out << (g.format == "table" ? report_to_table(report) : text);
    if (args.strict) {
      for (const auto& row : report.rows) {
        if (row.failures > 0) {
          std::cerr << "error: " << row.method << " failed in " << row.failures << " replications\n";
          return kRuntimeError;
        }
      }
    }
  }
  if (!args.out_dir.empty()) {
    std::filesystem::create_directories(args.out_dir);
    write_text(args.out_dir + "/" + config.name + ".csv", text);
    write_text(args.out_dir + "/" + config.name + ".config.json", sim_config_to_json(config) + "\n");
  }
  return kOk;
}

// sensitivity --------------------------------------------------------------

struct SensitivityArgs {
  std::string train;
  std::string test;
  std::string target = "y";
  std::string disbursement;
  std::vector<std::string> features;
  std::string simulate;
  std::size_t n = 100;
  std::string family = "logit";
  std::vector<double> grid{0.05, 2.0, 10};
  std::optional<std::size_t> search;
  std::string objective = "rmse";
};

std::pair<Dataset, Dataset> sensitivity_data(const SensitivityArgs& args, const Global& g) {
  if (!args.simulate.empty()) {
    const SimConfig c = SimConfig::preset(args.simulate);
    if (c.kind == ExperimentKind::Multinomial) {
      throw Error(ErrorKind::ConfigError, "--simulate needs a logistic or poisson preset");
    }
    const SeedSpec seed{g.seed, 0};
    RandomStream train_rng = derive_rng(seed, 0, 0);
    RandomStream test_rng = derive_rng(seed, 0, 1);
    if (c.kind == ExperimentKind::Logistic) {
      return {gen_logistic(args.n, c.beta0, c.sigma, c.rho_corr, train_rng).data,
              gen_logistic(args.n, c.beta0, c.sigma, c.rho_corr, test_rng).data};
    }
    return {gen_poisson(args.n, c.beta0, c.sigma, c.rho_corr, train_rng).data,
            gen_poisson(args.n, c.beta0, c.sigma, c.rho_corr, test_rng).data};
  }
  if (args.train.empty() || args.test.empty()) {
    throw CLI::ValidationError("sensitivity", "either --simulate or both --train and --test are required");
  }
  CsvSchema schema;
  schema.target = args.target;
  schema.features = args.features;
  if (!args.disbursement.empty()) schema.disbursement = args.disbursement;
  auto train = to_dataset(read_csv_file(args.train), schema).data;
  if (schema.features.empty()) schema.features = train.feature_names;
  auto test = to_dataset(read_csv_file(args.test), schema).data;
  return {std::move(train), std::move(test)};
}

int cmd_sensitivity(const SensitivityArgs& args, const Global& g, std::ostream& out) {
  Family family = parse_family(args.family);
  if (!args.simulate.empty()) {
    family = SimConfig::preset(args.simulate).kind == ExperimentKind::Poisson ? Family::Poisson : family;
  }
  const auto [train, test] = sensitivity_data(args, g);
  if (args.search) {
    const SearchResult result = stochastic_search(train, test, family, *args.search, SeedSpec{g.seed, 0},
                                                  parse_objective(args.objective), g.threads);
    if (g.format == "table") {
      char buf[160];
      std::snprintf(buf, sizeof buf, "best a=%.6g b=%.6g score=%.6g (%zu candidates, %zu skipped)\n",
                    result.best_a, result.best_b, result.best_score, result.trace.size(), result.skipped);
      out << buf;
    } else {
      out << result.to_csv();
    }
    return kOk;
  }
  if (args.grid.size() != 3 || args.grid[2] < 1.0) {
    throw CLI::ValidationError("--grid", "expected lo,hi,count");
  }
  const GridSpec spec = GridSpec::linear(args.grid[0], args.grid[1], static_cast<std::size_t>(args.grid[2]));
  const GridReport report = sensitivity_grid(train, test, family, spec, g.threads);
  if (g.format == "table") {
    const auto best = report.best();
    char buf[64];
    out << "     a \\ b";
    for (double b : report.b_values) {
      std::snprintf(buf, sizeof buf, " %8.3f", b);
      out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < report.a_values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%10.3f", report.a_values[i]);
      out << buf;
      for (const auto& s : report.scores[i]) {
        if (s) std::snprintf(buf, sizeof buf, " %8.4f", *s);
        else std::snprintf(buf, sizeof buf, " %8s", "NA");
        out << buf;
      }
      out << '\n';
    }
    std::snprintf(buf, sizeof buf, "best a=%.4g b=%.4g score=%.6f\n", report.a_values[best.i],
                  report.b_values[best.j], best.score);
    out << buf;
  } else {
    out << report.to_csv();
  }
  return kOk;
}

// shards -------------------------------------------------------------------

struct ShardArgs {
  DataArgs data;
  HyperArgs hyper;
  std::string family = "logit";
  std::size_t shards = 1;
  std::size_t redeliver = 0;
  std::string emit_partials;
};

int cmd_shards(const ShardArgs& args, const Global& g, std::ostream& out) {
  const CsvDataset ds = to_dataset(read_csv_file(args.data.path), args.data.schema());
  const Family family = parse_family(args.family);
  const HarnessResult result = run_harness(ds.data.X, ds.data.y, args.shards, family, args.hyper.resolve(family),
                                           SeedSpec{g.seed, 0}, HarnessOptions{g.threads, args.redeliver});
  if (!args.emit_partials.empty()) {
    std::filesystem::create_directories(args.emit_partials);
    for (const auto& stats : result.partials) {
      const std::string stem = args.emit_partials + "/shard_" + std::to_string(stats.shard_id);
      const auto frame = encode_frame(stats);
      std::ofstream bin(stem + ".bin", std::ios::binary);
      bin.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
      write_text(stem + ".json", to_debug_json(stats) + "\n");
    }
  }
  print_matrix(out, g, {"beta"}, ds.data.feature_names, result.beta);
  if (g.format == "table") {
    char buf[128];
    for (const auto& t : result.timings) {
      std::snprintf(buf, sizeof buf, "shard %llu: %llu rows, %.1f us\n", static_cast<unsigned long long>(t.shard_id),
                    static_cast<unsigned long long>(t.rows), t.micros);
      out << buf;
    }
    if (result.duplicates_rejected > 0) out << "duplicates rejected: " << result.duplicates_rejected << '\n';
  }
  return kOk;
}

// uncertainty --------------------------------------------------------------

struct UncertaintyArgs {
  DataArgs data;
  HyperArgs hyper;
  std::string family = "logit";
  std::size_t draws = 1000;
  double level = 0.95;
  std::string draws_out;
};

int cmd_uncertainty(const UncertaintyArgs& args, const Global& g, std::ostream& out) {
  const CsvDataset ds = to_dataset(read_csv_file(args.data.path), args.data.schema());
  const Family family = parse_family(args.family);
  const BetaDraws draws =
      sample_beta(ds.data.X, ds.data.y, family, args.hyper.resolve(family), args.draws, SeedSpec{g.seed, 0},
                  g.threads);
  const CoefficientSummary s = summarize(draws, args.level);
  Matrix table(s.mean.size(), 4);
  table << s.mean, s.sd, s.lower, s.upper;
  print_matrix(out, g, {"mean", "sd", "lower", "upper"}, ds.data.feature_names, table);
  if (!args.draws_out.empty()) {
    std::ofstream f(args.draws_out);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + args.draws_out + "'");
    write_csv(f, ds.data.feature_names, draws.draws);
  }
  return kOk;
}

// generate -----------------------------------------------------------------

struct GenerateArgs {
  std::string dataset = "logistic";
  std::size_t n = 100;
  std::vector<double> beta;
  double sigma = 3.0;
  double rho = 0.5;
  double noise = 0.1;
  std::size_t classes = 4;
  std::size_t features = 3;
  std::string out;
};

int cmd_generate(const GenerateArgs& args, const Global& g, std::ostream& out) {
  RandomStream rng = derive_rng(SeedSpec{g.seed, 0}, 0);
  Dataset data;
  std::vector<std::string> header;
  Matrix values;
  if (args.dataset == "logistic" || args.dataset == "poisson") {
    const bool logistic = args.dataset == "logistic";
    Vector beta0 = SimConfig::preset(logistic ? "exp1" : "exp3").beta0;
    if (!args.beta.empty()) beta0 = Eigen::Map<const Vector>(args.beta.data(), static_cast<Eigen::Index>(args.beta.size()));
    const double sigma = logistic ? args.sigma : std::min(args.sigma, 1.0);
    data = logistic ? gen_logistic(args.n, beta0, sigma, args.rho, rng).data
                    : gen_poisson(args.n, beta0, sigma, args.rho, rng).data;
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("y");
    values.resize(data.X.rows(), data.X.cols() + 1);
    values << data.X, data.y;
  } else if (args.dataset == "dmr") {
    const auto gen = gen_dmr(args.n, args.features, args.classes, rng);
    const Matrix& counts = gen.data.counts->counts;
    const Eigen::Index P = gen.data.X.cols() - 1;
    for (Eigen::Index j = 0; j < P; ++j) header.push_back("x" + std::to_string(j + 1));
    for (Eigen::Index k = 0; k < counts.cols(); ++k) header.push_back("count" + std::to_string(k));
    header.push_back("class");
    values.resize(gen.data.X.rows(), P + counts.cols() + 1);
    values << gen.data.X.rightCols(P), counts, gen.data.y;
  } else if (args.dataset == "sinc" || args.dataset == "circular") {
    data = args.dataset == "sinc" ? gen_sinc(args.n, args.noise, rng) : gen_circular(args.n, rng);
    for (Eigen::Index j = 0; j < data.X.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("y");
    values.resize(data.X.rows(), data.X.cols() + 1);
    values << data.X, data.y;
  }
  if (args.out.empty()) {
    write_csv(out, header, values);
  } else {
    std::ofstream f(args.out);
    if (!f) throw Error(ErrorKind::ConfigError, "cannot write '" + args.out + "'");
    write_csv(f, header, values);
  }
  return kOk;
}

bool is_usage_error(ErrorKind kind) {
  return kind == ErrorKind::ConfigError || kind == ErrorKind::InvalidHyper;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jacobi prior estimators: fit, predict, simulate and study GLMs"};
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "root seed");
  app.add_option("--threads", g.threads, "worker threads (0: hardware concurrency)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "table"}));

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model on a CSV file and save it");
  add_data_options(fit_cmd, fit.data, "--train");
  add_hyper_options(fit_cmd, fit.hyper);
  fit_cmd->add_option("--family", fit.family, "logit, probit or poisson")->check(CLI::IsMember(kFamilies));
  fit_cmd->add_option("--model-out", fit.model_out, "model file to write")->required();

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved model to a CSV file");
  predict_cmd->add_option("--model", predict_args.model)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--data", predict_args.data)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict_args.out, "output CSV (default: stdout)");

  ExperimentArgs experiment;
  auto* experiment_cmd = app.add_subcommand("experiment", "run a simulation study");
  experiment_cmd->add_option("--config", experiment.config, "JSON configuration")->check(CLI::ExistingFile);
  experiment_cmd->add_option("--preset", experiment.preset, "named study")
      ->check(CLI::IsMember({"exp1", "exp2", "exp3", "exp4", "exp6", "exp7"}));
  experiment_cmd->add_option("--replications", experiment.replications);
  experiment_cmd->add_option("--bootstrap", experiment.bootstrap);
  experiment_cmd->add_option("--sizes", experiment.sizes, "sample sizes for exp2")->delimiter(',');
  experiment_cmd->add_option("--out", experiment.out_dir, "directory for the report and resolved config");
  experiment_cmd->add_flag("--strict", experiment.strict, "exit 1 if any replication failed");
  experiment_cmd->add_flag("!--no-timing", experiment.timing, "omit timing columns");

  SensitivityArgs sensitivity;
  auto* sensitivity_cmd = app.add_subcommand("sensitivity", "score a grid of (a, b) or search it at random");
  sensitivity_cmd->add_option("--train", sensitivity.train)->check(CLI::ExistingFile);
  sensitivity_cmd->add_option("--test", sensitivity.test)->check(CLI::ExistingFile);
  sensitivity_cmd->add_option("--target", sensitivity.target);
  sensitivity_cmd->add_option("--disbursement", sensitivity.disbursement);
  sensitivity_cmd->add_option("--features", sensitivity.features)->delimiter(',');
  sensitivity_cmd->add_option("--simulate", sensitivity.simulate, "generate data from a preset")
      ->check(CLI::IsMember({"exp1", "exp3", "exp6", "exp7"}));
  sensitivity_cmd->add_option("--n", sensitivity.n);
  sensitivity_cmd->add_option("--family", sensitivity.family)->check(CLI::IsMember(kFamilies));
  sensitivity_cmd->add_option("--grid", sensitivity.grid, "lo,hi,count")->delimiter(',')->expected(3);
  sensitivity_cmd->add_option("--search", sensitivity.search, "random search budget");
  sensitivity_cmd->add_option("--objective", sensitivity.objective)
      ->check(CLI::IsMember({"rmse", "accuracy", "utility"}));

  ShardArgs shards;
  auto* shards_cmd = app.add_subcommand("shards", "fit through the partitioned sufficient-statistic path");
  add_data_options(shards_cmd, shards.data);
  add_hyper_options(shards_cmd, shards.hyper);
  shards_cmd->add_option("--family", shards.family)->check(CLI::IsMember(kFamilies));
  shards_cmd->add_option("--shards", shards.shards)->check(CLI::PositiveNumber);
  shards_cmd->add_option("--redeliver", shards.redeliver, "extra deliveries of every frame");
  shards_cmd->add_option("--emit-partials", shards.emit_partials, "directory for shard frames");

  UncertaintyArgs uncertainty;
  auto* uncertainty_cmd = app.add_subcommand("uncertainty", "Monte Carlo draws of the coefficients");
  add_data_options(uncertainty_cmd, uncertainty.data);
  add_hyper_options(uncertainty_cmd, uncertainty.hyper);
  uncertainty_cmd->add_option("--family", uncertainty.family)->check(CLI::IsMember(kFamilies));
  uncertainty_cmd->add_option("--draws", uncertainty.draws)->check(CLI::PositiveNumber);
  uncertainty_cmd->add_option("--level", uncertainty.level)->check(CLI::Range(0.0, 1.0));
  uncertainty_cmd->add_option("--draws-out", uncertainty.draws_out);

  GenerateArgs generate;
  auto* generate_cmd = app.add_subcommand("generate", "write a simulated dataset as CSV");
  generate_cmd->add_option("--dataset", generate.dataset)
      ->check(CLI::IsMember({"logistic", "poisson", "dmr", "sinc", "circular"}));
  generate_cmd->add_option("--n", generate.n)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--beta", generate.beta)->delimiter(',');
  generate_cmd->add_option("--sigma", generate.sigma);
  generate_cmd->add_option("--rho", generate.rho);
  generate_cmd->add_option("--noise", generate.noise);
  generate_cmd->add_option("--classes", generate.classes);
  generate_cmd->add_option("--features", generate.features);
  generate_cmd->add_option("--out", generate.out);

  try {
    std::vector<std::string> reversed(argv.rbegin(), argv.rend());
    app.parse(reversed);
    if (*fit_cmd) return cmd_fit(fit, g, out);
    if (*predict_cmd) return cmd_predict(predict_args, out);
    if (*experiment_cmd) return cmd_experiment(experiment, g, out, &app);
    if (*sensitivity_cmd) return cmd_sensitivity(sensitivity, g, out);
    if (*shards_cmd) return cmd_shards(shards, g, out);
    if (*uncertainty_cmd) return cmd_uncertainty(uncertainty, g, out);
    if (*generate_cmd) return cmd_generate(generate, g, out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage_error(e.kind()) ? kUsageError : kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace jacobi::cli
