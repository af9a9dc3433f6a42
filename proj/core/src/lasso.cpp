#include "debias/lasso.hpp"

#include <algorithm>
#include <cmath>

namespace debias {
namespace {

void check_config(const LassoConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ValidationError("LassoConfig.tol must be > 0");
  if (cfg.max_sweeps < 1) throw ValidationError("LassoConfig.max_sweeps must be >= 1");
  if (cfg.max_scaled_iters < 1) throw ValidationError("LassoConfig.max_scaled_iters must be >= 1");
  if (!(cfg.sigma_tol > 0.0)) throw ValidationError("LassoConfig.sigma_tol must be > 0");
}

Index resolve_n(const Matrix& X_cc, Index n_total) {
  if (n_total < 0) return X_cc.rows();
  if (n_total < X_cc.rows())
    throw ValidationError("n_total smaller than the number of complete cases");
  return n_total;
}

}  // namespace

double soft_threshold(double u, double t) {
  if (t < 0.0) throw ValidationError("soft_threshold requires t >= 0");
  if (u > t) return u - t;
  if (u < -t) return u + t;
  return 0.0;
}

double lasso_objective(const Matrix& X_cc, const Vector& y_cc, double lambda,
                       const Vector& beta, Index n_total) {
  const Index n = resolve_n(X_cc, n_total);
  const Vector r = y_cc - X_cc * beta;
  return r.squaredNorm() / static_cast<double>(n) + lambda * beta.lpNorm<1>();
}

LassoFit lasso_cd(const Matrix& X_cc, const Vector& y_cc, double lambda,
                  const LassoConfig& cfg, const Vector* warm_start, Index n_total) {
  check_config(cfg);
  const Index m = X_cc.rows();
  const Index d = X_cc.cols();
  if (m < 1) throw ValidationError("lasso_cd requires at least one row");
  if (y_cc.size() != m) throw ValidationError("lasso_cd: y length does not match row count");
  if (lambda < 0.0) throw ValidationError("lasso_cd requires lambda >= 0");
  const Index n = resolve_n(X_cc, n_total);
  const double inv_n = 1.0 / static_cast<double>(n);

  LassoFit fit;
  if (warm_start) {
    if (warm_start->size() != d)
      throw ValidationError("lasso_cd: warm start length does not match column count");
    fit.beta = *warm_start;
  } else {
    fit.beta = Vector::Zero(d);
  }

  Vector a(d);
  for (Index j = 0; j < d; ++j) {
    a[j] = 2.0 * inv_n * X_cc.col(j).squaredNorm();
    if (a[j] == 0.0) {
      if (lambda == 0.0)
        throw ValidationError("column " + std::to_string(j) +
                              " has zero sum of squares and lambda = 0: coordinate undetermined");
      fit.frozen_columns.push_back(j);
    }
  }

  Vector r = y_cc - X_cc * fit.beta;
  double prev_obj = r.squaredNorm() * inv_n + lambda * fit.beta.lpNorm<1>();

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < d; ++j) {
      if (a[j] == 0.0) continue;
      const double old = fit.beta[j];
      const double c = 2.0 * inv_n * X_cc.col(j).dot(r) + a[j] * old;
      const double next = soft_threshold(c, lambda) / a[j];
      if (next != old) {
        r.noalias() -= (next - old) * X_cc.col(j);
        fit.beta[j] = next;
        max_change = std::max(max_change, std::abs(next - old));
      }
    }
    fit.sweeps = sweep + 1;
    const double obj = r.squaredNorm() * inv_n + lambda * fit.beta.lpNorm<1>();
    if (obj > prev_obj + 1e-12 * (1.0 + std::abs(prev_obj))) ++fit.monotonicity_violations;
    prev_obj = obj;
    if (max_change < cfg.tol) {
      fit.objective = obj;
      fit.converged = true;
      return fit;
    }
  }
  fit.objective = prev_obj;
  fit.converged = false;
  return fit;
}

PilotFit scaled_lasso(const Matrix& X_cc, const Vector& y_cc, const LassoConfig& cfg,
                      Index n_total) {
  check_config(cfg);
  const Index m = X_cc.rows();
  const Index d = X_cc.cols();
  if (m < 2) throw ValidationError("scaled_lasso requires at least two complete cases");
  if (y_cc.size() != m) throw ValidationError("scaled_lasso: y length does not match row count");
  const Index n = resolve_n(X_cc, n_total);
  const double inv_m = 1.0 / static_cast<double>(m);

  const double lambda0 = std::sqrt(2.0 * std::log(static_cast<double>(d)) /
                                   static_cast<double>(n));
  const double mean_y = y_cc.mean();
  const double sd_y = std::sqrt((y_cc.array() - mean_y).square().sum() /
                                static_cast<double>(m - 1));
  const double floor = std::max(1e-10 * sd_y, 1e-300);

  PilotFit out;
  double sigma = std::max(std::sqrt(y_cc.squaredNorm() * inv_m), floor);
  Vector beta = Vector::Zero(d);
  bool inner_converged = true;
  double lambda_used = lambda0 * sigma;

  for (int it = 0; it < cfg.max_scaled_iters; ++it) {
    lambda_used = lambda0 * sigma;
    const LassoFit step = lasso_cd(X_cc, y_cc, lambda_used, cfg, &beta, n);
    beta = step.beta;
    inner_converged = step.converged;
    out.monotonicity_violations += step.monotonicity_violations;
    out.frozen_columns = step.frozen_columns;
    out.iterations = it + 1;

    double sigma_new = std::sqrt((y_cc - X_cc * beta).squaredNorm() * inv_m);
    if (sigma_new < floor) {
      sigma_new = floor;
      out.sigma_floored = true;
    }
    const double change = std::abs(sigma_new - sigma);
    sigma = sigma_new;
    if (change < cfg.sigma_tol) {
      out.converged = inner_converged;
      out.beta_hat = beta;
      out.sigma_hat = sigma;
      out.lambda = lambda_used;
      return out;
    }
  }
  out.converged = false;
  out.beta_hat = beta;
  out.sigma_hat = sigma;
  out.lambda = lambda_used;
  return out;
}

PilotFit pilot_fit(const Dataset& data, const LassoConfig& cfg) {
  const CompleteCases cc = complete_case_view(data);
  return scaled_lasso(cc.covariates, cc.outcomes, cfg, data.n());
}

}  // namespace debias
