#ifndef DEBIAS_LASSO_HPP_
#define DEBIAS_LASSO_HPP_

#include "debias/types.hpp"

namespace debias {

struct LassoConfig {
  double tol = 1e-7;          // max coordinate change per sweep
  int max_sweeps = 10000;
  int max_scaled_iters = 100;
  double sigma_tol = 1e-6;
};

struct LassoFit {
  Vector beta;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = true;
  std::vector<Index> frozen_columns;
  long monotonicity_violations = 0;
};

/// sign(u) * max(|u| - t, 0). Requires t >= 0.
double soft_threshold(double u, double t);

/// Coordinate descent for
///   (1/n_total) sum_i (y_i - x_i' beta)^2 + lambda ||beta||_1
/// over the rows of X_cc (the complete cases), normalized by the full
/// sample size n_total (pass -1 to use the row count of X_cc).
///
/// Columns with zero sum of squares keep their warm-start value and are
/// reported in frozen_columns; with lambda = 0 such a column makes the
/// problem ill-posed and a ValidationError is thrown.
LassoFit lasso_cd(const Matrix& X_cc, const Vector& y_cc, double lambda,
                  const LassoConfig& cfg = {}, const Vector* warm_start = nullptr,
                  Index n_total = -1);

/// Scaled Lasso: alternates a Lasso step at penalty lambda0 * sigma with the
/// residual-scale update sigma = sqrt((1/m) sum_i (y_i - x_i' beta)^2),
/// where lambda0 = sqrt(2 log(d) / n_total). Stops when the sigma change
/// drops below cfg.sigma_tol. sigma is floored at 1e-10 * sd(y_cc) so exact
/// interpolation cannot zero out the penalty.
PilotFit scaled_lasso(const Matrix& X_cc, const Vector& y_cc,
                      const LassoConfig& cfg = {}, Index n_total = -1);

/// scaled_lasso on the complete cases of `data`, normalized by data.n().
PilotFit pilot_fit(const Dataset& data, const LassoConfig& cfg = {});

/// Objective of lasso_cd at beta; shared by tests and the sweep monitor.
double lasso_objective(const Matrix& X_cc, const Vector& y_cc, double lambda,
                       const Vector& beta, Index n_total = -1);

}  // namespace debias

#endif  // DEBIAS_LASSO_HPP_
