#include "debias/lasso.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace debias;

namespace {

Matrix random_matrix(Index m, Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix X(m, d);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = normal(rng);
  return X;
}

Vector random_vector(Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(m);
  for (Index i = 0; i < m; ++i) v[i] = normal(rng);
  return v;
}

double kkt_violation(const Matrix& X, const Vector& y, double lambda, const Vector& beta,
                     Index n_total) {
  const double n = static_cast<double>(n_total);
  const Vector r = y - X * beta;
  double worst = 0.0;
  for (Index j = 0; j < X.cols(); ++j) {
    const double a = 2.0 / n * X.col(j).squaredNorm();
    if (a == 0.0) continue;
    const double grad = -2.0 / n * X.col(j).dot(r);
    const double scale = std::max(1.0, a);
    double viol;
    if (beta[j] != 0.0)
      viol = std::abs(grad + lambda * (beta[j] > 0 ? 1.0 : -1.0));
    else
      viol = std::max(0.0, std::abs(grad) - lambda);
    worst = std::max(worst, viol / scale);
  }
  return worst;
}

}  // namespace

TEST_CASE("soft threshold branches") {
  CHECK(soft_threshold(2.0, 0.5) == doctest::Approx(1.5));
  CHECK(soft_threshold(-0.3, 0.5) == 0.0);
  CHECK(soft_threshold(0.7, 0.0) == doctest::Approx(0.7));
  CHECK(soft_threshold(-2.0, 0.5) == doctest::Approx(-1.5));
  CHECK_THROWS_AS(soft_threshold(1.0, -0.1), ValidationError);
}

TEST_CASE("lasso on orthonormal design matches the closed form") {
  std::mt19937_64 rng(11);
  const Index m = 8, d = 4;
  const Matrix raw = random_matrix(m, d, rng);
  const Eigen::HouseholderQR<Matrix> qr(raw);
  const Matrix Q = qr.householderQ() * Matrix::Identity(m, d);
  const Matrix X = std::sqrt(static_cast<double>(m)) * Q;  // (1/m) X'X = I

  Vector c(d);
  c << 1.8, -0.4, 0.9, -2.5;
  const Vector y = X * (0.5 * c);  // makes (2/m) X'y = c

  for (double lambda : {0.1, 0.6, 1.2}) {
    const LassoFit fit = lasso_cd(X, y, lambda);
    REQUIRE(fit.converged);
    for (Index j = 0; j < d; ++j)
      CHECK(fit.beta[j] == doctest::Approx(soft_threshold(c[j], lambda) / 2.0).epsilon(1e-8));
  }
}

TEST_CASE("lasso matches an independent proximal-gradient oracle") {
  std::mt19937_64 rng(23);
  for (int inst = 0; inst < 12; ++inst) {
    const Index m = 8 + static_cast<Index>(rng() % 13);  // up to 20
    const Index d = 2 + static_cast<Index>(rng() % 5);   // up to 6
    const Matrix X = random_matrix(m, d, rng);
    const Vector y = random_vector(m, rng);
    const double lambda = 0.05 + 0.4 * static_cast<double>(inst % 4);

    const LassoFit fit = lasso_cd(X, y, lambda);
    const Vector ref = oracles::lasso_ista(X, y, lambda, m);
    const double f_cd = lasso_objective(X, y, lambda, fit.beta);
    const double f_ref = lasso_objective(X, y, lambda, ref);
    CHECK(std::abs(f_cd - f_ref) <= 1e-8);
    CHECK(fit.monotonicity_violations == 0);
  }
}

TEST_CASE("full-sample normalization is honored when rows were dropped") {
  std::mt19937_64 rng(31);
  const Index m = 14, d = 4;
  const Index n_total = 25;
  const Matrix X = random_matrix(m, d, rng);
  const Vector y = random_vector(m, rng);
  const double lambda = 0.2;
  const LassoFit fit = lasso_cd(X, y, lambda, {}, nullptr, n_total);
  const Vector ref = oracles::lasso_ista(X, y, lambda, n_total);
  CHECK(std::abs(lasso_objective(X, y, lambda, fit.beta, n_total) -
                 lasso_objective(X, y, lambda, ref, n_total)) <= 1e-8);
  CHECK_THROWS_AS(lasso_cd(X, y, lambda, {}, nullptr, m - 1), ValidationError);
}

TEST_CASE("full shrinkage and zero response give the zero vector") {
  std::mt19937_64 rng(17);
  const Matrix X = random_matrix(12, 5, rng);
  const Vector y = random_vector(12, rng);
  const double lambda_max = (2.0 / 12.0) * (X.transpose() * y).lpNorm<Eigen::Infinity>();
  const LassoFit big = lasso_cd(X, y, 2.0 * lambda_max + 0.1);
  CHECK(big.beta.lpNorm<Eigen::Infinity>() == 0.0);

  const LassoFit zero = lasso_cd(X, Vector::Zero(12), 0.3);
  CHECK(zero.beta.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("zero columns: frozen under penalty, rejected when unpenalized") {
  std::mt19937_64 rng(41);
  Matrix X = random_matrix(10, 3, rng);
  X.col(1).setZero();
  const Vector y = random_vector(10, rng);

  const LassoFit fit = lasso_cd(X, y, 0.4);
  REQUIRE(fit.frozen_columns.size() == 1);
  CHECK(fit.frozen_columns[0] == 1);
  CHECK(fit.beta[1] == 0.0);

  Vector warm(3);
  warm << 0.0, 7.5, 0.0;
  const LassoFit warm_fit = lasso_cd(X, y, 0.4, {}, &warm);
  CHECK(warm_fit.beta[1] == 7.5);  // frozen at the warm-start value

  CHECK_THROWS_AS(lasso_cd(X, y, 0.0), ValidationError);
}

TEST_CASE("KKT conditions hold at convergence") {
  std::mt19937_64 rng(53);
  const LassoConfig cfg;
  for (int inst = 0; inst < 8; ++inst) {
    const Matrix X = random_matrix(20, 6, rng);
    const Vector y = random_vector(20, rng);
    const double lambda = 0.15 + 0.2 * (inst % 3);
    const LassoFit fit = lasso_cd(X, y, lambda, cfg);
    REQUIRE(fit.converged);
    CHECK(kkt_violation(X, y, lambda, fit.beta, 20) <= 10.0 * cfg.tol);
  }
}

TEST_CASE("warm and cold starts agree in objective") {
  std::mt19937_64 rng(67);
  const Matrix X = random_matrix(18, 5, rng);
  const Vector y = random_vector(18, rng);
  const double lambda = 0.25;
  const LassoConfig cfg;
  const LassoFit cold = lasso_cd(X, y, lambda, cfg);
  Vector warm = random_vector(5, rng);
  const LassoFit warm_fit = lasso_cd(X, y, lambda, cfg, &warm);
  CHECK(std::abs(cold.objective - warm_fit.objective) <= 2.0 * cfg.tol);
}

TEST_CASE("scaled lasso recovers the noise level on pure noise") {
  std::mt19937_64 rng(71);
  double mean_sigma = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const Matrix X = random_matrix(200, 50, rng);
    const Vector y = random_vector(200, rng);  // beta0 = 0, sigma = 1
    const PilotFit fit = scaled_lasso(X, y);
    CHECK(fit.sigma_hat > 0.0);
    mean_sigma += fit.sigma_hat;
  }
  mean_sigma /= reps;
  CHECK(mean_sigma > 0.75);
  CHECK(mean_sigma < 1.25);
}

TEST_CASE("scaled lasso on noiseless sparse data recovers the coefficients") {
  std::mt19937_64 rng(83);
  const Index m = 200, d = 20;
  const Matrix X = random_matrix(m, d, rng);
  Vector beta = Vector::Zero(d);
  beta[0] = 4.0;
  beta[3] = -6.0;
  beta[9] = 5.0;
  const Vector y = X * beta;
  const PilotFit fit = scaled_lasso(X, y);
  CHECK(fit.sigma_hat < 1e-4);  // at or near the interpolation floor
  CHECK((fit.beta_hat - beta).lpNorm<Eigen::Infinity>() <= 0.1);
}

TEST_CASE("scaled lasso 1-D fit sits within the soft-threshold bias of truth") {
  std::mt19937_64 rng(97);
  const Matrix X = random_matrix(150, 1, rng);
  const Vector y = 2.0 * X.col(0);
  const PilotFit fit = scaled_lasso(X, y);
  const double a = 2.0 / 150.0 * X.col(0).squaredNorm();
  CHECK(std::abs(fit.beta_hat[0] - 2.0) <= fit.lambda / a + 1e-6);
}

TEST_CASE("scaled lasso input validation") {
  Matrix X(1, 2);
  X << 1.0, 2.0;
  Vector y(1);
  y << 3.0;
  CHECK_THROWS_AS(scaled_lasso(X, y), ValidationError);

  LassoConfig bad;
  bad.tol = 0.0;
  Matrix X2(3, 2);
  X2 << 1, 0, 0, 1, 1, 1;
  Vector y2(3);
  y2 << 1, 2, 3;
  CHECK_THROWS_AS(scaled_lasso(X2, y2, bad), ValidationError);
}
