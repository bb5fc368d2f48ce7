#include <doctest.h>

#include "jacobi/hyper.hpp"
#include "jacobi/simlab.hpp"
#include "test_util.hpp"

using namespace jacobi;

namespace {

std::pair<Dataset, Dataset> exp1_data(std::uint64_t k) {
  const Vector beta0 = (Vector(8) << 3, 1.5, 0, 0, 2, 0, 0, 0).finished();
  RandomStream train = derive_rng({81, 0}, k, 0);
  RandomStream test = derive_rng({81, 0}, k, 1);
  return {gen_logistic(100, beta0, 3.0, 0.5, train).data, gen_logistic(100, beta0, 3.0, 0.5, test).data};
}

}  // namespace

TEST_SUITE("hyper") {
  TEST_CASE("degenerate grid equals a direct fit") {
    const auto [train, test] = exp1_data(0);
    const GridReport r = sensitivity_grid(train, test, Family::Logit, {{0.5}, {0.5}});
    const FittedGLM fit = fit_jacobi(train.X, train.y, Family::Logit, {0.5, 0.5});
    CHECK(*r.scores[0][0] == surrogate_rmse(test.y, predict(fit, test.X)));
    CHECK(r.best().score == *r.scores[0][0]);
  }

  TEST_CASE("best cell is the minimum and output is thread independent") {
    const auto [train, test] = exp1_data(1);
    const GridSpec spec = GridSpec::linear(0.05, 2.0, 6);
    const GridReport r1 = sensitivity_grid(train, test, Family::Logit, spec, 1);
    const GridReport r4 = sensitivity_grid(train, test, Family::Logit, spec, 4);
    CHECK(r1.to_csv() == r4.to_csv());
    const auto best = r1.best();
    for (const auto& row : r1.scores)
      for (const auto& s : row) CHECK(best.score <= *s);
    CHECK(r1.missing() == 0);
    CHECK(r1.to_csv().rfind("a,b,score\n", 0) == 0);
  }

  TEST_CASE("invalid cells are recorded as missing") {
    const auto [train, test] = exp1_data(2);
    CHECK_THROWS_AS(sensitivity_grid(train, test, Family::Logit, {{0.0, 0.5}, {0.5}}), Error);
    GridSpec bad{{0.5, 0.25}, {0.5}};
    CHECK_THROWS_AS(bad.validate(), Error);
  }

  TEST_CASE("search determinism, prefix and incumbent") {
    const auto [train, val] = exp1_data(3);
    const SearchResult a = stochastic_search(train, val, Family::Logit, 30, {7, 0});
    const SearchResult b = stochastic_search(train, val, Family::Logit, 30, {7, 0}, Objective::Rmse, 3);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.trace.size() == 30);
    const auto inc = a.incumbent();
    for (std::size_t i = 1; i < inc.size(); ++i) CHECK(inc[i] <= inc[i - 1]);
    CHECK(a.best_score == inc.back());

    const SearchResult shorter = stochastic_search(train, val, Family::Logit, 10, {7, 0});
    for (std::size_t i = 0; i < 10; ++i) CHECK(shorter.trace[i].a == a.trace[i].a);
    CHECK(a.best_score <= shorter.best_score);

    const SearchResult single = stochastic_search(train, val, Family::Logit, 1, {7, 0});
    CHECK(single.best_a == a.trace[0].a);
    CHECK(single.best_b == a.trace[0].b);
    for (const auto& t : a.trace) {
      CHECK(t.a >= kSearchLower);
      CHECK(t.a <= kSearchUpper);
      CHECK(t.b >= kSearchLower);
      CHECK(t.b <= kSearchUpper);
    }
    CHECK_THROWS_AS(stochastic_search(train, val, Family::Logit, 0, {7, 0}), Error);
  }

  TEST_CASE("objectives") {
    const auto [train, val] = exp1_data(4);
    const FittedGLM fit = fit_jacobi(train.X, train.y, Family::Logit, {});
    CHECK(evaluate_objective(fit, val, Objective::Accuracy) == -accuracy(val.y, predict(fit, val.X)));
    CHECK_THROWS_AS(evaluate_objective(fit, val, Objective::Utility), Error);
    Dataset loans = val;
    loans.disbursement = Vector::Constant(val.y.size(), 100.0);
    const double u = -evaluate_objective(fit, loans, Objective::Utility);
    CHECK(u <= 0.5 * 100.0 * static_cast<double>(val.y.size()));
    CHECK(parse_objective("utility") == Objective::Utility);
    CHECK_THROWS_AS(parse_objective("auc"), Error);
  }
}
