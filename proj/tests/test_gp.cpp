#include <doctest.h>

#include <cmath>

#include "jacobi/gp.hpp"
#include "jacobi/simlab.hpp"
#include "test_util.hpp"

using namespace jacobi;

TEST_SUITE("gp") {
  TEST_CASE("kernel entries") {
    const Matrix A = (Matrix(2, 2) << 0, 0, 1, 0).finished();
    const Matrix K = kernel_matrix(A, A, {1.0, 1.0, 0.1});
    CHECK(K(0, 0) == 1.0);
    CHECK(K(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK((kernel_matrix(A, A, {2.5, 0.0, 0.1}).array() == 2.5).all());
    const Matrix B = (Matrix(1, 2) << 2, 0).finished();
    CHECK(kernel_matrix(A, B, {1.0, 1.0, 0.1}, KernelShape::SquaredExponential)(0, 0) ==
          doctest::Approx(std::exp(-4.0)));
    CHECK(kernel_matrix(A, B, {1.0, 1.0, 0.1}, KernelShape::Exponential)(0, 0) == doctest::Approx(std::exp(-2.0)));

    RandomStream rng = derive_rng({51, 0}, 0);
    const Matrix X = test::random_matrix(20, 3, rng);
    const Matrix S = kernel_matrix(X, X, {1.7, 0.8, 0.1});
    CHECK(S.isApprox(S.transpose(), 0.0));
    CHECK((S.diagonal().array() == 1.7).all());
    CHECK(parse_kernel_shape("squared_exponential") == KernelShape::SquaredExponential);
    CHECK_THROWS_AS(kernel_matrix<double>(X, Matrix::Ones(2, 2), KernelParams{}), Error);
    CHECK_THROWS_AS((KernelParams{-1.0, 1.0, 0.1}.validate()), Error);
  }

  TEST_CASE("duplicate rows without noise are singular") {
    const Matrix X = (Matrix(3, 1) << 0, 0, 1).finished();
    try {
      gp_fit_binary(X, (Vector(3) << 0, 1, 1).finished(), {}, {1.0, 1.0, 0.0});
      FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    }
  }

  TEST_CASE("interpolation and reversion to the linear term") {
    RandomStream rng = derive_rng({52, 0}, 0);
    const Matrix X = test::random_matrix(15, 2, rng);
    const Vector y = test::random_binary(15, rng);
    const GPModel m = gp_fit_binary(X, y, {}, {1.0, 1.0, 0.0});
    CHECK((gp_predict_mean(m, X) - m.eta_hat).cwiseAbs().maxCoeff() < 1e-6);

    const Matrix far = Matrix::Constant(1, 2, 1e3);
    CHECK(gp_predict_mean(m, far)[0] == doctest::Approx((far * m.beta)(0)).epsilon(1e-12));
  }

  TEST_CASE("predictive covariance") {
    RandomStream rng = derive_rng({53, 0}, 0);
    const Matrix X = test::random_matrix(25, 2, rng);
    const Vector y = test::random_binary(25, rng);
    const GPModel m = gp_fit_binary(X, y, {}, {1.3, 0.7, 0.2});
    const Matrix X0 = test::random_matrix(10, 2, rng);
    const LatentPrediction full = gp_predict_latent(m, X0);
    CHECK(full.cov.isApprox(full.cov.transpose()));
    CHECK(full.cov.diagonal().maxCoeff() <= 1.3 + 1e-8);
    CHECK(full.cov.diagonal().minCoeff() >= -1e-10);

    // Dense oracle for both covariance forms.
    const Matrix S = kernel_matrix(X, X, m.params) + 0.04 * Matrix::Identity(25, 25);
    const Matrix C = kernel_matrix(X0, X, m.params);
    const Matrix cross = C * S.inverse() * C.transpose();
    CHECK(test::rel_err(full.cov, kernel_matrix(X0, X0, m.params) - cross) < 1e-9);
    CHECK(test::rel_err(gp_predict_latent(m, X0, CovarianceForm::CrossTermOnly).cov, cross) < 1e-9);
    CHECK(test::rel_err(full.mean, X0 * m.beta + C * S.inverse() * (m.eta_hat - X * m.beta)) < 1e-9);
  }

  TEST_CASE("larger rho pulls the mean toward the linear term") {
    const Matrix X = (Matrix(2, 1) << 1.0, 3.0).finished();
    const Vector y = (Vector(2) << 1.0, 0.0).finished();
    const Matrix X0 = (Matrix(1, 1) << 1.5).finished();
    double previous = std::numeric_limits<double>::infinity();
    for (double rho : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      const GPModel m = gp_fit_binary(X, y, {}, {1.0, rho, 0.1});
      const double gap = std::abs(gp_predict_mean(m, X0)[0] - (X0 * m.beta)(0));
      CHECK(gap < previous);
      previous = gap;
    }
  }

  TEST_CASE("probabilities") {
    RandomStream rng = derive_rng({54, 0}, 0);
    const Matrix X = test::random_matrix(10, 1, rng);
    GPModel m = gp_fit_binary(X, test::random_binary(10, rng), {}, {});
    m.beta.setZero();
    m.alpha.setZero();
    CHECK(gp_predict_proba(m, X)[3] == 0.5);
  }

  TEST_CASE("multiclass") {
    RandomStream rng = derive_rng({55, 0}, 0);
    const Matrix X = test::random_matrix(30, 2, rng);
    std::vector<int> labels;
    for (Eigen::Index i = 0; i < 30; ++i) labels.push_back(X(i, 0) > 0 ? 1 : 0);
    const CountTable Y = CountTable::from_labels(labels, 2);
    const GPMulticlassModel m = gp_fit_multiclass(X, Y, {1.0, 1.0}, {1.0, 1.0, 0.1});
    const Matrix latent = gp_multiclass_latent(m, X);
    const auto cls = gp_multiclass_predict(m, X);
    for (Eigen::Index i = 0; i < 30; ++i) {
      CHECK(cls[static_cast<std::size_t>(i)] == (latent(i, 1) > latent(i, 0) ? 1 : 0));
    }
    const Matrix p = gp_multiclass_proba(m, X);
    CHECK((p.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-12);

    // Per-class latent equals a single poisson-latent GP fit on that column.
    for (Eigen::Index k = 0; k < 2; ++k) {
      const GPModel single = gp_fit(X, Y.counts.col(k), Family::Poisson, {1.0, 1.0}, {1.0, 1.0, 0.1});
      CHECK(test::rel_err(latent.col(k), gp_predict_mean(single, X)) < 1e-12);
    }
  }

  TEST_CASE("constant class column gives a constant latent mean") {
    const Matrix X = Matrix::Ones(12, 1);
    Matrix counts(12, 2);
    counts.col(0).setConstant(2.0);
    for (Eigen::Index i = 0; i < 12; ++i) counts(i, 1) = static_cast<double>(i % 3);
    const GPMulticlassModel m = gp_fit_multiclass(X, CountTable{counts}, {1.0, 1.0}, {1.0, 1.0, 0.1});
    const Matrix latent = gp_multiclass_latent(m, Matrix::Ones(5, 1));
    CHECK((latent.col(0).array() - latent(0, 0)).abs().maxCoeff() < 1e-12);
    CHECK(latent(0, 0) == doctest::Approx(std::log(1.5)).epsilon(1e-10));
  }

  TEST_CASE("circular task with defaults") {
    RandomStream rng = derive_rng({57, 0}, 0);
    const Dataset train = gen_circular(200, rng);
    const Dataset test = gen_circular(800, rng);
    const GPModel m = gp_fit_binary(train.X, train.y, {}, {});
    CHECK(accuracy(test.y, gp_predict_proba(m, test.X)) >= 0.94);
  }
}
