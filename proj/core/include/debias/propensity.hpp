#ifndef DEBIAS_PROPENSITY_HPP_
#define DEBIAS_PROPENSITY_HPP_

#include "debias/lasso.hpp"
#include "debias/types.hpp"

#include <cstdint>
#include <vector>

namespace debias {

/// Pluggable estimator of pi_i = P(R_i = 1 | X_i).
class PropensityEstimator {
 public:
  virtual ~PropensityEstimator() = default;
  virtual PropensityEstimate fit(const Matrix& covariates, const IntVector& mask) const = 0;
};

/// Penalized logistic fit at a fixed penalty zeta:
///   minimize -(1/n) sum_i [R_i X_i' theta - log(1 + exp(X_i' theta))] + zeta ||theta||_1
/// by proximal gradient with backtracking. pi_hat_i = sigmoid(X_i' theta_hat).
/// A single-class mask yields the constant class rate with `degenerate` set.
PropensityEstimate logistic_lasso_fit(const Matrix& X, const IntVector& R, double zeta,
                                      const LassoConfig& cfg = {},
                                      const Vector* warm_start = nullptr);

/// 40 logarithmically spaced penalties on [0.1, 300] * sqrt(log(d) / n).
std::vector<double> default_zeta_grid(Index n, Index d);

/// Cross-validated penalty choice: mean held-out logistic deviance per zeta,
/// minimizer returned, ties broken toward the larger zeta. Probabilities are
/// clipped to [1e-12, 1 - 1e-12] inside the held-out log-loss only.
/// fold_of[i] in [0, folds) assigns row i to its held-out fold.
double cv_zeta_folds(const Matrix& X, const IntVector& R, const std::vector<double>& grid,
                     const std::vector<int>& fold_of, const LassoConfig& cfg = {});

/// cv_zeta_folds on deterministic modulo-`folds` assignment of a seed-shuffled
/// row order.
double cv_zeta(const Matrix& X, const IntVector& R, const std::vector<double>& grid,
               int folds, const LassoConfig& cfg = {}, uint64_t seed = 0);

/// Wraps known propensities unchanged; entries must lie in (0, 1].
PropensityEstimate oracle_propensity(const Vector& probs);

/// Logistic-Lasso estimator with the penalty chosen by cross-validation.
class LogisticLassoCv : public PropensityEstimator {
 public:
  explicit LogisticLassoCv(int folds = 5, uint64_t seed = 0, LassoConfig cfg = {})
      : folds_(folds), seed_(seed), cfg_(cfg) {}
  PropensityEstimate fit(const Matrix& covariates, const IntVector& mask) const override;

 private:
  int folds_;
  uint64_t seed_;
  LassoConfig cfg_;
};

/// Known propensity scores, independent of the data passed to fit().
class OraclePropensity : public PropensityEstimator {
 public:
  explicit OraclePropensity(Vector probs);
  PropensityEstimate fit(const Matrix& covariates, const IntVector& mask) const override;

 private:
  Vector probs_;
};

}  // namespace debias

#endif  // DEBIAS_PROPENSITY_HPP_
