#include <doctest.h>

#include "jacobi/numkit.hpp"
#include "test_util.hpp"

using namespace jacobi;

TEST_SUITE("numkit") {
  TEST_CASE("least squares on hand examples") {
    CHECK(solve_normal_equations(Matrix::Identity(3, 3), Vector::LinSpaced(3, 1, 3))
              .isApprox(Vector::LinSpaced(3, 1, 3)));

    const Vector mean = solve_normal_equations(Matrix::Ones(4, 1), (Vector(4) << 1, 1, -1, -1).finished());
    CHECK(mean.size() == 1);
    CHECK(mean[0] == doctest::Approx(0.0));

    Matrix X(3, 2);
    X << 1, 0, 1, 1, 1, 2;
    const Vector beta = solve_normal_equations(X, (Vector(3) << 0, 1, 2).finished());
    CHECK(beta[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(beta[1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("least squares agrees with the pseudo-inverse") {
    for (std::uint64_t k = 0; k < 20; ++k) {
      RandomStream rng = derive_rng({17, 0}, k);
      const Matrix X = test::random_matrix(20, 5, rng);
      const Vector t = test::random_matrix(20, 1, rng);
      CHECK(test::rel_err(solve_normal_equations(X, t), test::pinv_solve(X, t)) < 1e-8);
    }
  }

  TEST_CASE("rank deficiency and shape errors") {
    Matrix X(4, 2);
    X << 1, 2, 2, 4, 3, 6, 4, 8;
    CHECK_THROWS_AS(LeastSquaresProjector{X}, Error);
    try {
      LeastSquaresProjector{X};
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankDeficient);
    }
    try {
      LeastSquaresProjector{Matrix::Ones(2, 3)};
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
    const LeastSquaresProjector P(Matrix::Identity(3, 3));
    CHECK_THROWS_AS(P.solve(Vector::Ones(4)), Error);
  }

  TEST_CASE("cholesky hand examples") {
    CHECK(cholesky_solve(2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2)).isApprox(0.5 * Matrix::Identity(2, 2)));
    Matrix A(2, 2);
    A << 2, 1, 1, 2;
    const Matrix r = cholesky_solve(A, Matrix::Ones(2, 1));
    CHECK(r(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    try {
      cholesky_solve(Matrix::Ones(2, 2), Matrix::Identity(2, 2));
      FAIL("expected NotPositiveDefinite");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    }
    Matrix asym(2, 2);
    asym << 2, 1, 0, 2;
    CHECK_THROWS_AS(checked_cholesky(asym), Error);
  }

  TEST_CASE("cholesky recovers Z from A Z") {
    for (std::uint64_t k = 0; k < 20; ++k) {
      RandomStream rng = derive_rng({18, 0}, k);
      const Matrix M = test::random_matrix(6, 6, rng);
      const Matrix A = M.transpose() * M + Matrix::Identity(6, 6);
      const Matrix Z = test::random_matrix(6, 3, rng);
      CHECK(test::rel_err(cholesky_solve(A, A * Z), Z) < 1e-8);
    }
  }

  TEST_CASE("gram solve matches the QR path") {
    RandomStream rng = derive_rng({19, 0}, 0);
    const Matrix X = test::random_matrix(50, 4, rng);
    const Vector t = test::random_matrix(50, 1, rng);
    const Vector qr = solve_normal_equations(X, t);
    const Vector gram = solve_gram(X.transpose() * X, X.transpose() * t);
    CHECK(test::rel_err(gram, qr) < 1e-10);

    Matrix singular = Matrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_gram(singular, Vector::Ones(2)), Error);
  }

  TEST_CASE("non-finite input is rejected") {
    Matrix X = Matrix::Identity(3, 3);
    X(1, 1) = std::nan("");
    try {
      require_finite(X, "X");
      FAIL("expected NonFinite");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonFinite);
    }
  }
}
