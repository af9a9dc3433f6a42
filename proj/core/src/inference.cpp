#include "debias/inference.hpp"

#include "debias/stats.hpp"

#include <cmath>

namespace debias {

double debiased_estimate(const QueryPoint& x, const Vector& beta_hat, const Vector& weights,
                         const Dataset& data) {
  if (beta_hat.size() != data.dim())
    throw ValidationError("debiased_estimate: coefficient length mismatch");
  if (weights.size() != data.n())
    throw ValidationError("debiased_estimate: weight length mismatch");
  const double base = regression_value(x, beta_hat);
  double correction = 0.0;
  for (Index i = 0; i < data.n(); ++i) {
    if (data.mask()[i] != 1) continue;
    correction += weights[i] * (data.outcomes()[i] - data.covariates().row(i).dot(beta_hat));
  }
  return base + correction / std::sqrt(static_cast<double>(data.n()));
}

double debiased_estimate_dual(const QueryPoint& x, const Vector& beta_hat, const Vector& ell_hat,
                              const Dataset& data) {
  if (beta_hat.size() != data.dim())
    throw ValidationError("debiased_estimate_dual: coefficient length mismatch");
  if (ell_hat.size() != data.dim())
    throw ValidationError("debiased_estimate_dual: ell length mismatch");
  const double base = regression_value(x, beta_hat);
  double correction = 0.0;
  for (Index i = 0; i < data.n(); ++i) {
    if (data.mask()[i] != 1) continue;
    correction += data.covariates().row(i).dot(ell_hat) *
                  (data.outcomes()[i] - data.covariates().row(i).dot(beta_hat));
  }
  return base - correction / (2.0 * static_cast<double>(data.n()));
}

double variance_estimate(const Vector& pi_hat, const Vector& weights) {
  if (pi_hat.size() != weights.size())
    throw ValidationError("variance_estimate: length mismatch");
  return (pi_hat.array() * weights.array().square()).sum();
}

std::pair<double, double> confidence_interval(double m_hat, double variance_hat, double sigma,
                                              double level, Index n) {
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("confidence level must lie in (0, 1)");
  if (!(sigma > 0.0)) throw ValidationError("confidence_interval requires sigma > 0");
  if (n < 1) throw ValidationError("confidence_interval requires n >= 1");
  if (variance_hat < 0.0)
    throw NumericalError("negative variance estimate; interval refused");
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double half = z * sigma * std::sqrt(variance_hat / static_cast<double>(n));
  return {m_hat - half, m_hat + half};
}

PipelineResult run_pipeline(const Dataset& data, const QueryPoint& x,
                            const PipelineConfig& cfg) {
  if (x.dim() != data.dim())
    throw ValidationError("query dimension does not match the dataset");
  if (!(cfg.level > 0.0 && cfg.level < 1.0))
    throw ValidationError("confidence level must lie in (0, 1)");
  if (cfg.sigma_override && !(*cfg.sigma_override > 0.0))
    throw ValidationError("sigma override must be > 0");

  auto partial = std::make_shared<PipelineResult>();

  try {
    partial->pilot = pilot_fit(data, cfg.lasso);
  } catch (const std::exception& e) {
    throw PipelineRunError("pilot", e.what(), partial);
  }

  try {
    const PropensityEstimator* estimator = cfg.propensity.get();
    LogisticLassoCv fallback(cfg.cv_folds, cfg.seed, cfg.lasso);
    if (!estimator) estimator = &fallback;
    partial->propensity = estimator->fit(data.covariates(), data.mask());
  } catch (const std::exception& e) {
    throw PipelineRunError("propensity", e.what(), partial);
  }

  double gamma = 0.0;
  try {
    if (cfg.fixed_gamma) {
      if (!(*cfg.fixed_gamma > 0.0)) throw ValidationError("fixed gamma must be > 0");
      gamma = *cfg.fixed_gamma;
    } else {
      TuningConfig tc;
      tc.folds = cfg.cv_folds;
      tc.points = cfg.gamma_points;
      tc.seed = cfg.seed;
      tc.dual = cfg.dual;
      partial->gamma_selection = cv_gamma(data.covariates(), partial->propensity.pi_hat, x, tc);
      gamma = select(*partial->gamma_selection, cfg.gamma_rule);
    }
  } catch (const std::exception& e) {
    throw PipelineRunError("tuning", e.what(), partial);
  }

  try {
    partial->solution =
        solve_dual_cd(data.covariates(), partial->propensity.pi_hat, x, gamma, cfg.dual);
  } catch (const std::exception& e) {
    throw PipelineRunError("debias", e.what(), partial);
  }

  try {
    InferenceResult& inf = partial->inference;
    inf.m_hat = debiased_estimate(x, partial->pilot.beta_hat, partial->solution.weights, data);
    inf.variance_hat = variance_estimate(partial->propensity.pi_hat, partial->solution.weights);
    inf.sigma_used = cfg.sigma_override.value_or(partial->pilot.sigma_hat);
    inf.level = cfg.level;
    const auto ci =
        confidence_interval(inf.m_hat, inf.variance_hat, inf.sigma_used, cfg.level, data.n());
    inf.ci_lower = ci.first;
    inf.ci_upper = ci.second;
  } catch (const std::exception& e) {
    throw PipelineRunError("estimate", e.what(), partial);
  }

  return std::move(*partial);
}

}  // namespace debias
