#include "debias/propensity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace debias {
namespace {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }

void check_mask(const IntVector& R) {
  for (Index i = 0; i < R.size(); ++i)
    if (R[i] != 0 && R[i] != 1)
      throw ValidationError("mask entry " + std::to_string(i) + " must be 0 or 1");
}

// Smooth part of the objective and its gradient at scores s = X theta.
double smooth_value(const IntVector& R, const Vector& s) {
  const double n = static_cast<double>(s.size());
  double acc = 0.0;
  for (Index i = 0; i < s.size(); ++i) acc += R[i] * s[i] - softplus(s[i]);
  return -acc / n;
}

double op_norm_squared(const Matrix& X) {
  const Index d = X.cols();
  Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double lam = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vector w = X.transpose() * (X * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    if (it > 3 && std::abs(norm - lam) < 1e-10 * std::max(1.0, norm)) return norm;
    lam = norm;
    v = w;
  }
  return lam;
}

struct ProxPath {
  double lipschitz = 0.0;  // reused across penalties on the same X
};

PropensityEstimate prox_grad_fit(const Matrix& X, const IntVector& R, double zeta,
                                 const LassoConfig& cfg, const Vector* warm_start,
                                 ProxPath* shared) {
  const Index n = X.rows();
  const Index d = X.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  double lipschitz = shared ? shared->lipschitz : 0.0;
  if (lipschitz <= 0.0) {
    lipschitz = op_norm_squared(X) * inv_n / 4.0;
    if (shared) shared->lipschitz = lipschitz;
  }
  const double step0 = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;

  PropensityEstimate out;
  Vector theta = warm_start && warm_start->size() == d ? *warm_start : Vector::Zero(d);
  Vector s = X * theta;
  double g = smooth_value(R, s);
  double objective = g + zeta * theta.lpNorm<1>();
  out.converged = false;

  for (int it = 0; it < cfg.max_sweeps; ++it) {
    Vector resid(n);
    for (Index i = 0; i < n; ++i) resid[i] = static_cast<double>(R[i]) - sigmoid(s[i]);
    const Vector grad = -inv_n * (X.transpose() * resid);

    double t = step0;
    Vector theta_next(d), s_next;
    double g_next = 0.0;
    for (int bt = 0; bt < 60; ++bt) {
      for (Index j = 0; j < d; ++j)
        theta_next[j] = soft_threshold(theta[j] - t * grad[j], t * zeta);
      s_next = X * theta_next;
      g_next = smooth_value(R, s_next);
      const Vector delta = theta_next - theta;
      const double quad = g + grad.dot(delta) + delta.squaredNorm() / (2.0 * t);
      if (g_next <= quad + 1e-15 * std::abs(quad)) break;
      t *= 0.5;
    }

    const double change = (theta_next - theta).lpNorm<Eigen::Infinity>();
    theta = theta_next;
    s.swap(s_next);
    g = g_next;
    const double obj_next = g + zeta * theta.lpNorm<1>();
    if (obj_next > objective + 1e-12 * (1.0 + std::abs(objective)))
      ++out.monotonicity_violations;
    objective = obj_next;
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }

  out.theta_hat = theta;
  out.zeta = zeta;
  out.pi_hat.resize(n);
  for (Index i = 0; i < n; ++i) out.pi_hat[i] = sigmoid(s[i]);
  return out;
}

double held_out_deviance(const Matrix& X_held, const IntVector& R_held,
                         const PropensityEstimate& fit) {
  double acc = 0.0;
  for (Index i = 0; i < X_held.rows(); ++i) {
    double p;
    if (fit.theta_hat)
      p = sigmoid(X_held.row(i).dot(*fit.theta_hat));
    else
      p = fit.pi_hat.size() > 0 ? fit.pi_hat[0] : 0.5;
    p = std::clamp(p, 1e-12, 1.0 - 1e-12);
    acc -= R_held[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return acc;
}

}  // namespace

PropensityEstimate logistic_lasso_fit(const Matrix& X, const IntVector& R, double zeta,
                                      const LassoConfig& cfg, const Vector* warm_start) {
  const Index n = X.rows();
  if (n < 1) throw ValidationError("logistic_lasso_fit requires at least one row");
  if (R.size() != n) throw ValidationError("logistic_lasso_fit: mask length mismatch");
  if (zeta < 0.0) throw ValidationError("logistic_lasso_fit requires zeta >= 0");
  check_mask(R);

  const int ones = R.sum();
  if (ones == 0 || ones == n) {
    PropensityEstimate out;
    out.pi_hat = Vector::Constant(n, static_cast<double>(ones) / static_cast<double>(n));
    out.degenerate = true;
    return out;
  }
  return prox_grad_fit(X, R, zeta, cfg, warm_start, nullptr);
}

std::vector<double> default_zeta_grid(Index n, Index d) {
  if (n < 1 || d < 1) throw ValidationError("zeta grid requires n >= 1 and d >= 1");
  const double scale = std::sqrt(std::log(static_cast<double>(d)) / static_cast<double>(n));
  const double lo = 0.1 * scale;
  const double hi = 300.0 * scale;
  std::vector<double> grid(40);
  if (!(lo > 0.0)) {  // d = 1 makes log d = 0; keep a usable degenerate grid
    std::fill(grid.begin(), grid.end(), 0.0);
    return grid;
  }
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int k = 0; k < 40; ++k) grid[static_cast<size_t>(k)] = std::exp(llo + (lhi - llo) * k / 39.0);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

double cv_zeta_folds(const Matrix& X, const IntVector& R, const std::vector<double>& grid,
                     const std::vector<int>& fold_of, const LassoConfig& cfg) {
  const Index n = X.rows();
  if (R.size() != n) throw ValidationError("cv_zeta: mask length mismatch");
  if (fold_of.size() != static_cast<size_t>(n))
    throw ValidationError("cv_zeta: fold assignment length mismatch");
  if (grid.empty()) throw ValidationError("cv_zeta: empty grid");
  check_mask(R);
  int folds = 0;
  for (int f : fold_of) {
    if (f < 0) throw ValidationError("cv_zeta: negative fold id");
    folds = std::max(folds, f + 1);
  }
  if (folds < 2) throw ValidationError("cv_zeta requires at least two folds");

  // Evaluate the path from the largest penalty down, warm-starting each fit.
  std::vector<size_t> order(grid.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&grid](size_t a, size_t b) { return grid[a] > grid[b]; });

  std::vector<double> total_deviance(grid.size(), 0.0);
  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train_rows, held_rows;
    for (Index i = 0; i < n; ++i)
      (fold_of[static_cast<size_t>(i)] == f ? held_rows : train_rows).push_back(i);
    if (train_rows.empty() || held_rows.empty())
      throw ValidationError("cv_zeta: fold " + std::to_string(f) + " leaves no training or held-out rows");

    Matrix X_train(static_cast<Index>(train_rows.size()), X.cols());
    IntVector R_train(static_cast<Index>(train_rows.size()));
    for (size_t k = 0; k < train_rows.size(); ++k) {
      X_train.row(static_cast<Index>(k)) = X.row(train_rows[k]);
      R_train[static_cast<Index>(k)] = R[train_rows[k]];
    }
    Matrix X_held(static_cast<Index>(held_rows.size()), X.cols());
    IntVector R_held(static_cast<Index>(held_rows.size()));
    for (size_t k = 0; k < held_rows.size(); ++k) {
      X_held.row(static_cast<Index>(k)) = X.row(held_rows[k]);
      R_held[static_cast<Index>(k)] = R[held_rows[k]];
    }

    const int train_ones = R_train.sum();
    ProxPath shared;
    Vector warm = Vector::Zero(X.cols());
    for (size_t idx : order) {
      PropensityEstimate fit;
      if (train_ones == 0 || train_ones == R_train.size()) {
        fit.pi_hat = Vector::Constant(R_train.size(),
                                      static_cast<double>(train_ones) /
                                          static_cast<double>(R_train.size()));
        fit.degenerate = true;
      } else {
        fit = prox_grad_fit(X_train, R_train, grid[idx], cfg, &warm, &shared);
        warm = *fit.theta_hat;
      }
      total_deviance[idx] += held_out_deviance(X_held, R_held, fit);
    }
  }

  size_t best = 0;
  for (size_t k = 1; k < grid.size(); ++k) {
    const bool better = total_deviance[k] < total_deviance[best];
    const bool tie_to_larger = total_deviance[k] == total_deviance[best] && grid[k] > grid[best];
    if (better || tie_to_larger) best = k;
  }
  return grid[best];
}

double cv_zeta(const Matrix& X, const IntVector& R, const std::vector<double>& grid,
               int folds, const LassoConfig& cfg, uint64_t seed) {
  if (folds < 2) throw ValidationError("cv_zeta requires folds >= 2");
  const Index n = X.rows();
  if (folds > n) throw ValidationError("cv_zeta: more folds than rows");
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold_of(static_cast<size_t>(n));
  for (size_t k = 0; k < perm.size(); ++k)
    fold_of[static_cast<size_t>(perm[k])] = static_cast<int>(k % static_cast<size_t>(folds));
  return cv_zeta_folds(X, R, grid, fold_of, cfg);
}

PropensityEstimate oracle_propensity(const Vector& probs) {
  if (probs.size() < 1) throw ValidationError("oracle propensities must be non-empty");
  for (Index i = 0; i < probs.size(); ++i)
    if (!(probs[i] > 0.0 && probs[i] <= 1.0))
      throw ValidationError("oracle propensity " + std::to_string(i) + " outside (0, 1]");
  PropensityEstimate out;
  out.pi_hat = probs;
  return out;
}

PropensityEstimate LogisticLassoCv::fit(const Matrix& covariates, const IntVector& mask) const {
  const int ones = mask.sum();
  if (ones == 0 || ones == mask.size())
    return logistic_lasso_fit(covariates, mask, 0.0, cfg_);
  const std::vector<double> grid = default_zeta_grid(covariates.rows(), covariates.cols());
  const double zeta = cv_zeta(covariates, mask, grid, folds_, cfg_, seed_);
  PropensityEstimate out = logistic_lasso_fit(covariates, mask, zeta, cfg_);
  out.cv_seed = seed_;
  return out;
}

OraclePropensity::OraclePropensity(Vector probs) : probs_(std::move(probs)) {
  oracle_propensity(probs_);  // validates range and size
}

PropensityEstimate OraclePropensity::fit(const Matrix& covariates, const IntVector& mask) const {
  if (covariates.rows() != probs_.size() || mask.size() != probs_.size())
    throw ValidationError("oracle propensity length does not match the data");
  return oracle_propensity(probs_);
}

}  // namespace debias
