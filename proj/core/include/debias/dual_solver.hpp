#ifndef DEBIAS_DUAL_SOLVER_HPP_
#define DEBIAS_DUAL_SOLVER_HPP_

#include "debias/types.hpp"

namespace debias {

struct DualConfig {
  double tol = 1e-8;      // max coordinate change per sweep
  int max_sweeps = 20000;
  double tol_feas = -1.0;  // < 0 resolves to 1e-7 * (1 + ||x||_inf)
};

/// Effective feasibility slack for a query point under cfg.
double resolve_tol_feas(const DualConfig& cfg, const QueryPoint& x);

/// (1/(4n)) sum_i pi_i (X_i' ell)^2 + x' ell + (gamma/n) ||ell||_1,
/// with n the row count of X.
double dual_objective(const Vector& ell, const Matrix& X, const Vector& pi_hat,
                      const QueryPoint& x, double gamma);

/// Cyclic coordinate descent on the dual program. Coordinates whose curvature
/// (1/(2n)) sum_i pi_i x_ij^2 is not strictly positive are pinned at zero and
/// reported. The returned solution carries the derived primal weights and the
/// feasibility diagnostics of the box constraint.
DebiasSolution solve_dual_cd(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                             double gamma, const DualConfig& cfg = {},
                             const Vector* warm_start = nullptr);

/// w_i = -X_i' ell_hat / (2 sqrt(n)).
Vector weights_from_dual(const Matrix& X, const Vector& ell_hat, Index n);

struct Feasibility {
  bool feasible = false;
  double sup_norm = 0.0;  // || x - (1/sqrt(n)) sum_i w_i pi_i X_i ||_inf
};

/// Checks the primal box constraint: feasible iff sup_norm <= gamma/n + tol_feas.
Feasibility primal_feasibility(const Vector& weights, const Vector& pi_hat, const Matrix& X,
                               const QueryPoint& x, double gamma, double tol_feas);

struct PopulationDual {
  Vector ell0;
  Matrix gram;
};

/// ell0 = -2 gram^{-1} x by Cholesky; gram must be symmetric positive definite.
PopulationDual population_dual(const Matrix& gram, const QueryPoint& x);

struct CondMse {
  double var1 = 0.0;     // sigma_eps^2 sum_i w_i^2 pi_i
  double var2 = 0.0;     // (b0-b)' [sum_i w_i^2 pi_i (1-pi_i) X_i X_i'] (b0-b)
  double bias_sq = 0.0;  // ([ (1/sqrt(n)) sum_i w_i pi_i X_i - x ]' sqrt(n)(b0-b))^2
};

/// Decomposition of the conditional MSE of sqrt(n)(m_hat - m_0) given the
/// covariates, using the true propensities; simulation diagnostic only.
CondMse conditional_mse_decomposition(const Vector& weights, const Vector& beta,
                                      const Vector& beta0, const Vector& true_pi,
                                      const Matrix& X, const QueryPoint& x, double sigma_eps);

}  // namespace debias

#endif  // DEBIAS_DUAL_SOLVER_HPP_
