#include <doctest.h>

#include <string>

#include "jacobi/experiment.hpp"
#include "jacobi/mle.hpp"
#include "jacobi/simlab.hpp"

using namespace jacobi;

TEST_SUITE("experiment") {
  TEST_CASE("one replication equals a direct fit and evaluation") {
    SimConfig c = SimConfig::preset("exp1");
    c.replications = 1;
    c.methods = {"jacobi-logit", "mle-logit"};
    const ExperimentReport r = run_experiment(c);

    RandomStream train_rng = derive_rng(c.seed, 0, 0);
    RandomStream holdout_rng = derive_rng(c.seed, 0, 1);
    const Dataset train = gen_logistic(c.n, c.beta0, c.sigma, c.rho_corr, train_rng).data;
    const Dataset holdout = gen_logistic(c.n, c.beta0, c.sigma, c.rho_corr, holdout_rng).data;
    const FittedGLM fit = fit_jacobi(train.X, train.y, Family::Logit, {0.5, 0.5});
    CHECK(r.row("jacobi-logit").rmse_y.median == surrogate_rmse(train.y, predict(fit, train.X)));
    CHECK(r.row("jacobi-logit").rmse_y_holdout.median == surrogate_rmse(holdout.y, predict(fit, holdout.X)));
    CHECK(r.row("jacobi-logit").rmse_y_decoupled.median == surrogate_rmse(train.y, predict(fit, holdout.X)));
    CHECK(r.row("jacobi-logit").rmse_beta.median == beta_rmse(fit.beta, c.beta0));
    CHECK(r.row("jacobi-logit").rmse_y.se == 0.0);
    CHECK(r.row("jacobi-logit").time_multiple == 1.0);
    CHECK_THROWS_AS(r.row("jacobi-dmr"), Error);
  }

  TEST_CASE("metric columns are reproducible across runs and thread counts") {
    for (const char* name : {"exp1", "exp3", "exp4", "exp6", "exp7"}) {
      CAPTURE(name);
      SimConfig c = SimConfig::preset(name);
      c.replications = 12;
      c.bootstrap = 50;
      const std::string a = report_to_csv(run_experiment(c, 1), false);
      const std::string b = report_to_csv(run_experiment(c, 3), false);
      CHECK(a == b);
      c.seed.stream_id = 1;
      CHECK(report_to_csv(run_experiment(c, 1), false) != a);
    }
  }

  TEST_CASE("failed replications are counted") {
    SimConfig c = SimConfig::preset("exp1");
    c.replications = 40;
    c.bootstrap = 10;
    const ExperimentReport r = run_experiment(c);
    const auto& mle = r.row("mle-logit");
    CHECK(mle.succeeded + mle.failures == 40);
    CHECK(r.row("jacobi-logit").failures == 0);
  }

  TEST_CASE("config parsing") {
    const SimConfig c = parse_sim_config(R"({"preset": "exp3", "replications": 20, "seed": {"root": 5, "stream": 2},
                                             "hyper": {"a": 0.3, "b": 0.7}})");
    CHECK(c.kind == ExperimentKind::Poisson);
    CHECK(c.replications == 20);
    CHECK(c.seed.root_seed == 5);
    CHECK(c.seed.stream_id == 2);
    CHECK(c.hyper->a == 0.3);
    CHECK(c.effective_methods() == std::vector<std::string>{"jacobi-poisson", "mle-poisson"});

    const SimConfig round = parse_sim_config(sim_config_to_json(c));
    CHECK(sim_config_to_json(round) == sim_config_to_json(c));

    auto error_of = [](const std::string& text) {
      try {
        parse_sim_config(text);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ConfigError);
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(error_of(R"({"beta0": [1, "x"]})").find("/beta0/1") != std::string::npos);
    CHECK(error_of(R"({"n": -3})").find("/n") != std::string::npos);
    CHECK(error_of(R"({"kind": "gamma"})").find("/kind") != std::string::npos);
    CHECK(error_of(R"({"preset": "exp1", "methods": ["jacobi-dmr"]})").find("/methods/0") != std::string::npos);
    CHECK(error_of(R"({"preset": "exp1", "contamination": {"kind": "flip", "fraction": 2}})").find("/contamination/fraction") !=
          std::string::npos);
    CHECK(error_of("{not json").find("JSON") != std::string::npos);
    CHECK_THROWS_AS(SimConfig::preset("exp9"), Error);
  }

  TEST_CASE("csv and table rendering") {
    SimConfig c = SimConfig::preset("exp3");
    c.replications = 5;
    c.bootstrap = 5;
    const ExperimentReport r = run_experiment(c);
    const std::string csv = report_to_csv(r);
    CHECK(csv.rfind("method,succeeded,failures,rmse_y,", 0) == 0);
    CHECK(csv.find("jacobi-poisson,5,0,") != std::string::npos);
    CHECK(csv.find("time_multiple") != std::string::npos);
    CHECK(report_to_csv(r, false).find("time_us") == std::string::npos);
    CHECK(report_to_table(r).find("mle-poisson") != std::string::npos);
  }

  TEST_CASE("small consistency sweep") {
    SimConfig c = SimConfig::preset("exp1");
    c.replications = 20;
    c.bootstrap = 10;
    const auto rows = run_consistency(c, {200, 2000});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].schedule == "fixed");
    CHECK(rows[1].schedule == "one-over-n");
    CHECK(rows[3].rmse_beta.median < rows[1].rmse_beta.median);
    CHECK(consistency_to_csv(rows).rfind("n,schedule,rmse_beta,rmse_beta_se\n", 0) == 0);
  }
}
