#ifndef DEBIAS_TESTS_ORACLES_HPP_
#define DEBIAS_TESTS_ORACLES_HPP_

#include "debias/types.hpp"

// Independent reference solvers for cross-checking the production code.
// Deliberately slow and simple; none of them share code with core/src.
namespace debias::oracles {

/// Proximal-gradient (ISTA) minimizer of
///   (1/n_total) ||y - X b||^2 + lambda ||b||_1.
Vector lasso_ista(const Matrix& X, const Vector& y, double lambda, Index n_total,
                  int max_iters = 200000, double tol = 1e-13);

/// Proximal-gradient minimizer of the dual program
///   (1/(4n)) sum_i pi_i (X_i' l)^2 + x' l + (gamma/n) ||l||_1,
/// the L1 subgradient handled through its proximal map.
Vector dual_proxgrad(const Matrix& X, const Vector& pi, const Vector& x, double gamma,
                     int max_iters = 500000, double tol = 1e-14);

struct PrimalQpResult {
  Vector weights;
  double objective = 0.0;   // sum_i pi_i w_i^2
  double sup_norm = 0.0;    // feasibility residual of the returned point
  bool projection_ok = false;
};

/// Projected-subgradient solver of the primal program
///   min sum_i pi_i w_i^2  s.t.  || x - (1/sqrt(n)) sum_i w_i pi_i X_i ||_inf <= gamma/n,
/// the projection computed by Dykstra's alternating scheme over the 2d
/// halfspaces. Requires pi > 0 and X'diag(pi)^2 X nonsingular (the feasible
/// start is the least-norm solution of the moment equations).
PrimalQpResult primal_qp_projected_subgradient(const Matrix& X, const Vector& pi,
                                               const Vector& x, double gamma,
                                               int max_iters = 4000);

/// Exhaustive conditional MSE E[(sqrt(n) m_hat - sqrt(n) m0)^2 | X]:
/// enumerates R in {0,1}^n and integrates the Gaussian noise analytically.
double enumerated_conditional_mse(const Matrix& X, const Vector& weights, const Vector& beta,
                                  const Vector& beta0, const Vector& pi, const Vector& x,
                                  double sigma_eps);

}  // namespace debias::oracles

#endif  // DEBIAS_TESTS_ORACLES_HPP_
