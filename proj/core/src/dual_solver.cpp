#include "debias/dual_solver.hpp"

#include "debias/lasso.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace debias {
namespace {

void check_dual_inputs(const Matrix& X, const Vector& pi_hat, const QueryPoint& x) {
  if (X.rows() < 1) throw ValidationError("dual program requires at least one row");
  if (pi_hat.size() != X.rows())
    throw ValidationError("propensity length does not match row count");
  if (x.dim() != X.cols())
    throw ValidationError("query dimension does not match column count");
}

void check_dual_config(const DualConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ValidationError("DualConfig.tol must be > 0");
  if (cfg.max_sweeps < 1) throw ValidationError("DualConfig.max_sweeps must be >= 1");
}

}  // namespace

double resolve_tol_feas(const DualConfig& cfg, const QueryPoint& x) {
  if (cfg.tol_feas >= 0.0) return cfg.tol_feas;
  return 1e-7 * (1.0 + x.coords().lpNorm<Eigen::Infinity>());
}

double dual_objective(const Vector& ell, const Matrix& X, const Vector& pi_hat,
                      const QueryPoint& x, double gamma) {
  check_dual_inputs(X, pi_hat, x);
  if (ell.size() != X.cols()) throw ValidationError("ell length does not match column count");
  if (!(gamma > 0.0)) throw ValidationError("dual objective requires gamma > 0");
  const double n = static_cast<double>(X.rows());
  const Vector u = X * ell;
  const double quad = (pi_hat.array() * u.array().square()).sum() / (4.0 * n);
  return quad + x.coords().dot(ell) + gamma / n * ell.lpNorm<1>();
}

DebiasSolution solve_dual_cd(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                             double gamma, const DualConfig& cfg, const Vector* warm_start) {
  check_dual_inputs(X, pi_hat, x);
  check_dual_config(cfg);
  if (!(gamma > 0.0)) throw ValidationError("solve_dual_cd requires gamma > 0");
  const Index n = X.rows();
  const Index d = X.cols();
  const double inv_2n = 0.5 / static_cast<double>(n);
  const double thresh = gamma / static_cast<double>(n);

  DebiasSolution sol;
  sol.gamma = gamma;
  sol.nonpositive_pi_warning = (pi_hat.array() <= 0.0).any();

  Vector curvature(d);
  // Rows scaled by pi once, so each coordinate's gradient term is one dot product.
  const Matrix Xpi = pi_hat.asDiagonal() * X;
  for (Index j = 0; j < d; ++j) {
    curvature[j] = inv_2n * Xpi.col(j).dot(X.col(j));
    if (!(curvature[j] > 0.0)) sol.frozen_coordinates.push_back(j);
  }

  Vector ell = warm_start && warm_start->size() == d ? *warm_start : Vector::Zero(d);
  for (Index j : sol.frozen_coordinates) ell[j] = 0.0;
  Vector u = X * ell;

  auto objective = [&]() {
    return (pi_hat.array() * u.array().square()).sum() * inv_2n * 0.5 +
           x.coords().dot(ell) + thresh * ell.lpNorm<1>();
  };

  double prev_obj = objective();
  sol.converged = false;
  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (!(curvature[j] > 0.0)) continue;
      const double old = ell[j];
      const double grad_others = inv_2n * Xpi.col(j).dot(u) + x.coords()[j] - curvature[j] * old;
      const double next = soft_threshold(-grad_others, thresh) / curvature[j];
      if (next != old) {
        u.noalias() += (next - old) * X.col(j);
        ell[j] = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    sol.sweeps = sweep + 1;
    const double obj = objective();
    if (obj > prev_obj + 1e-12 * (1.0 + std::abs(prev_obj))) ++sol.monotonicity_violations;
    prev_obj = obj;
    if (max_change < cfg.tol) {
      sol.converged = true;
      break;
    }
  }

  sol.ell_hat = ell;
  sol.dual_objective = prev_obj;
  sol.weights = weights_from_dual(X, ell, n);
  const Feasibility feas =
      primal_feasibility(sol.weights, pi_hat, X, x, gamma, resolve_tol_feas(cfg, x));
  sol.primal_feasible = feas.feasible;
  sol.constraint_sup_norm = feas.sup_norm;
  return sol;
}

Vector weights_from_dual(const Matrix& X, const Vector& ell_hat, Index n) {
  if (ell_hat.size() != X.cols())
    throw ValidationError("ell length does not match column count");
  if (n < 1) throw ValidationError("weights_from_dual requires n >= 1");
  return X * ell_hat / (-2.0 * std::sqrt(static_cast<double>(n)));
}

Feasibility primal_feasibility(const Vector& weights, const Vector& pi_hat, const Matrix& X,
                               const QueryPoint& x, double gamma, double tol_feas) {
  check_dual_inputs(X, pi_hat, x);
  if (weights.size() != X.rows())
    throw ValidationError("weight length does not match row count");
  const double n = static_cast<double>(X.rows());
  const Vector moment = X.transpose() * (weights.array() * pi_hat.array()).matrix() /
                        std::sqrt(n);
  Feasibility out;
  out.sup_norm = (x.coords() - moment).lpNorm<Eigen::Infinity>();
  out.feasible = out.sup_norm <= gamma / n + tol_feas;
  return out;
}

PopulationDual population_dual(const Matrix& gram, const QueryPoint& x) {
  if (gram.rows() != gram.cols()) throw ValidationError("gram matrix must be square");
  if (gram.rows() != x.dim()) throw ValidationError("gram dimension does not match query");
  const double scale = gram.cwiseAbs().maxCoeff();
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, scale))
    throw ValidationError("gram matrix is not symmetric");
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalError("gram matrix is not positive definite");
  PopulationDual out;
  out.gram = gram;
  out.ell0 = llt.solve(-2.0 * x.coords());
  return out;
}

CondMse conditional_mse_decomposition(const Vector& weights, const Vector& beta,
                                      const Vector& beta0, const Vector& true_pi,
                                      const Matrix& X, const QueryPoint& x, double sigma_eps) {
  const Index n = X.rows();
  const Index d = X.cols();
  if (weights.size() != n || true_pi.size() != n)
    throw ValidationError("conditional MSE: length mismatch on weights or propensities");
  if (beta.size() != d || beta0.size() != d || x.dim() != d)
    throw ValidationError("conditional MSE: coefficient or query dimension mismatch");
  for (Index i = 0; i < n; ++i)
    if (!(true_pi[i] >= 0.0 && true_pi[i] <= 1.0))
      throw ValidationError("true propensities must lie in [0, 1]");

  const Vector delta = beta0 - beta;
  const Vector scores = X * delta;
  CondMse out;
  double moment_dot_delta = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double w2 = weights[i] * weights[i];
    out.var1 += w2 * true_pi[i];
    out.var2 += w2 * true_pi[i] * (1.0 - true_pi[i]) * scores[i] * scores[i];
    moment_dot_delta += weights[i] * true_pi[i] * scores[i];
  }
  out.var1 *= sigma_eps * sigma_eps;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double bias = moment_dot_delta - root_n * x.coords().dot(delta);
  out.bias_sq = bias * bias;
  return out;
}

}  // namespace debias
