#ifndef DEBIAS_INFERENCE_HPP_
#define DEBIAS_INFERENCE_HPP_

#include "debias/dual_solver.hpp"
#include "debias/lasso.hpp"
#include "debias/propensity.hpp"
#include "debias/tuning.hpp"
#include "debias/types.hpp"

#include <memory>
#include <utility>

namespace debias {

/// x'beta_hat + (1/sqrt(n)) sum_i w_i R_i (Y_i - X_i' beta_hat).
double debiased_estimate(const QueryPoint& x, const Vector& beta_hat, const Vector& weights,
                         const Dataset& data);

/// Equivalent dual form x'beta_hat - (1/(2n)) sum_i R_i X_i' ell (Y_i - X_i' beta_hat).
double debiased_estimate_dual(const QueryPoint& x, const Vector& beta_hat, const Vector& ell_hat,
                              const Dataset& data);

/// sum_i pi_hat_i w_i^2; may be negative when propensities are, in which case
/// confidence_interval refuses it.
double variance_estimate(const Vector& pi_hat, const Vector& weights);

/// m_hat +- z_{(1+level)/2} * sigma * sqrt(variance_hat / n).
std::pair<double, double> confidence_interval(double m_hat, double variance_hat, double sigma,
                                              double level, Index n);

struct PipelineConfig {
  std::shared_ptr<const PropensityEstimator> propensity;  // null: logistic Lasso with CV zeta
  GammaRule gamma_rule = GammaRule::OneSe;
  double level = 0.95;
  std::optional<double> sigma_override;  // default: scaled-Lasso sigma_hat
  std::optional<double> fixed_gamma;     // bypasses gamma cross-validation
  uint64_t seed = 0;
  int cv_folds = 5;
  int gamma_points = 41;
  LassoConfig lasso;
  DualConfig dual;
};

struct PipelineResult {
  InferenceResult inference;
  PilotFit pilot;
  PropensityEstimate propensity;
  std::optional<GammaSelection> gamma_selection;  // absent under fixed_gamma
  DebiasSolution solution;
};

/// A stage failure carrying whatever stages had already completed.
struct PipelineRunError : PipelineError {
  PipelineRunError(const std::string& stage_name, const std::string& what,
                   std::shared_ptr<const PipelineResult> done)
      : PipelineError(stage_name, what), partial(std::move(done)) {}
  std::shared_ptr<const PipelineResult> partial;  // may be null
};

/// Pilot fit -> propensity fit -> gamma choice -> dual solve -> estimate/CI.
PipelineResult run_pipeline(const Dataset& data, const QueryPoint& x,
                            const PipelineConfig& cfg = {});

}  // namespace debias

#endif  // DEBIAS_INFERENCE_HPP_
