#include <doctest.h>

#include <cstring>

#include "jacobi/model_io.hpp"
#include "test_util.hpp"

using namespace jacobi;

TEST_SUITE("model_io") {
  TEST_CASE("glm round trip is exact") {
    RandomStream rng = derive_rng({101, 0}, 0);
    const Matrix X = test::random_matrix(30, 3, rng);
    const Vector y = test::random_binary(30, rng);
    const FittedGLM fit = fit_jacobi(X, y, Family::Probit, JacobiHyper::one_over_n());
    const ModelFile m = ModelFile::from_glm(fit, {"a", "b", "c"});
    const ModelFile back = model_from_json(model_to_json(m));
    CHECK(back.family == Family::Probit);
    CHECK(back.hyper.schedule == Schedule::OneOverN);
    CHECK(back.shapes.a == 1.0 / 30.0);
    CHECK(back.n_train == 30);
    CHECK(std::memcmp(back.beta.data(), fit.beta.data(), 3 * sizeof(double)) == 0);
    const Matrix p0 = m.predict(X);
    const Matrix p1 = back.predict(X);
    CHECK(std::memcmp(p0.data(), p1.data(), 30 * sizeof(double)) == 0);
    CHECK_THROWS_AS(back.predict(Matrix::Ones(2, 2)), Error);
  }

  TEST_CASE("multiclass round trip") {
    DmrModel dmr{(Matrix(2, 3) << 0.1, -0.2, 1.0 / 3.0, 4.5, 0.0, -1e-300).finished(), {1.0, 1.0}};
    const ModelFile m = ModelFile::from_dmr(dmr, 12, {"x1", "x2"}, {"A", "B", "C"});
    const ModelFile back = model_from_json(model_to_json(m));
    CHECK(back.kind == ModelFile::Kind::Multiclass);
    CHECK(back.class_labels == m.class_labels);
    CHECK(std::memcmp(back.beta.data(), dmr.betas.data(), 6 * sizeof(double)) == 0);
  }

  TEST_CASE("schema errors") {
    CHECK_THROWS_AS(model_from_json("{}"), Error);
    CHECK_THROWS_AS(model_from_json("not json"), Error);
    const std::string bad = R"({"format_version": 1, "kind": "glm", "family": "logit",
      "hyper": {"schedule": "fixed", "a": "0.5", "b": "0.5"}, "n_train": 3,
      "features": ["x"], "beta": ["1.0", "2.0"]})";
    CHECK_THROWS_AS(model_from_json(bad), Error);
    CHECK(format_exact(0.1) == "0.10000000000000001");
  }
}
