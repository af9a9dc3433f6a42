#include "debias/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace debias {

GammaRule gamma_rule_from_string(const std::string& name) {
  if (name == "min-cv") return GammaRule::MinCv;
  if (name == "1se") return GammaRule::OneSe;
  if (name == "min-feas") return GammaRule::MinFeas;
  throw ValidationError("unknown gamma rule '" + name + "' (expected min-cv, 1se or min-feas)");
}

std::string to_string(GammaRule rule) {
  switch (rule) {
    case GammaRule::MinCv: return "min-cv";
    case GammaRule::OneSe: return "1se";
    case GammaRule::MinFeas: return "min-feas";
  }
  throw ValidationError("unknown gamma rule value");
}

std::vector<double> gamma_grid(Index n, const QueryPoint& x, int points) {
  if (n < 1) throw ValidationError("gamma_grid requires n >= 1");
  if (points < 2) throw ValidationError("gamma_grid requires points >= 2");
  const double sup = x.coords().lpNorm<Eigen::Infinity>();
  if (!(sup > 0.0)) throw ValidationError("gamma_grid requires a nonzero query point");
  const double top = static_cast<double>(n) * sup;
  const double h = top / static_cast<double>(points - 1);
  std::vector<double> grid(static_cast<size_t>(points));
  grid[0] = 0.5 * h;
  for (int k = 1; k < points; ++k) grid[static_cast<size_t>(k)] = h * k;
  grid.back() = top;
  return grid;
}

GammaSelection cv_gamma_folds(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                              const std::vector<int>& fold_of, const std::vector<double>& grid,
                              const DualConfig& dual) {
  const Index n = X.rows();
  if (pi_hat.size() != n) throw ValidationError("cv_gamma: propensity length mismatch");
  if (x.dim() != X.cols()) throw ValidationError("cv_gamma: query dimension mismatch");
  if (fold_of.size() != static_cast<size_t>(n))
    throw ValidationError("cv_gamma: fold assignment length mismatch");
  if (grid.size() < 1) throw ValidationError("cv_gamma: empty grid");
  for (size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw ValidationError("cv_gamma: grid must be strictly increasing");
  if (!(grid.front() > 0.0)) throw ValidationError("cv_gamma: grid values must be positive");
  int folds = 0;
  for (int f : fold_of) {
    if (f < 0) throw ValidationError("cv_gamma: negative fold id");
    folds = std::max(folds, f + 1);
  }
  if (folds < 2) throw ValidationError("cv_gamma requires at least two folds");

  GammaSelection sel;
  sel.grid = grid;
  sel.folds = folds;
  const size_t g = grid.size();
  Matrix risk(static_cast<Index>(g), folds);
  std::vector<std::vector<bool>> feasible(g, std::vector<bool>(static_cast<size_t>(folds)));

  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train_rows, held_rows;
    for (Index i = 0; i < n; ++i)
      (fold_of[static_cast<size_t>(i)] == f ? held_rows : train_rows).push_back(i);
    if (train_rows.empty() || held_rows.empty())
      throw ValidationError("cv_gamma: fold " + std::to_string(f) +
                            " leaves no training or held-out rows");

    Matrix X_train(static_cast<Index>(train_rows.size()), X.cols());
    Vector pi_train(static_cast<Index>(train_rows.size()));
    for (size_t k = 0; k < train_rows.size(); ++k) {
      X_train.row(static_cast<Index>(k)) = X.row(train_rows[k]);
      pi_train[static_cast<Index>(k)] = pi_hat[train_rows[k]];
    }
    Matrix X_held(static_cast<Index>(held_rows.size()), X.cols());
    Vector pi_held(static_cast<Index>(held_rows.size()));
    for (size_t k = 0; k < held_rows.size(); ++k) {
      X_held.row(static_cast<Index>(k)) = X.row(held_rows[k]);
      pi_held[static_cast<Index>(k)] = pi_hat[held_rows[k]];
    }
    const double tol_feas = resolve_tol_feas(dual, x);

    // The solver and the objective both normalise by their own row count, so
    // each fold sees the full-sample grid value rescaled by its share of rows:
    // the penalty ratio gamma/n is what the grid indexes, and it must match
    // between the training solve and the held-out evaluation.
    const double n_full = static_cast<double>(n);
    const double scale_train = static_cast<double>(train_rows.size()) / n_full;
    const double scale_held = static_cast<double>(held_rows.size()) / n_full;

    // Largest gamma first: sparsest solution, then warm-start downward.
    Vector warm = Vector::Zero(X.cols());
    for (size_t k = g; k-- > 0;) {
      const double gamma_train = grid[k] * scale_train;
      const DebiasSolution fit = solve_dual_cd(X_train, pi_train, x, gamma_train, dual, &warm);
      warm = fit.ell_hat;
      sel.monotonicity_violations += fit.monotonicity_violations;
      if (!fit.converged) ++sel.nonconverged_fits;
      risk(static_cast<Index>(k), f) =
          dual_objective(fit.ell_hat, X_held, pi_held, x, grid[k] * scale_held);
      const Feasibility fold_feas = primal_feasibility(fit.weights, pi_train, X_train, x,
                                                       gamma_train, tol_feas);
      feasible[k][static_cast<size_t>(f)] = fold_feas.feasible;
    }
  }

  sel.cv_mean.resize(g);
  sel.cv_se.resize(g);
  sel.feasible_all_folds.resize(g);
  for (size_t k = 0; k < g; ++k) {
    const auto row = risk.row(static_cast<Index>(k));
    const double mean = row.mean();
    double var = 0.0;
    for (int f = 0; f < folds; ++f) var += (row[f] - mean) * (row[f] - mean);
    var /= static_cast<double>(folds - 1);
    sel.cv_mean[k] = mean;
    sel.cv_se[k] = std::sqrt(var / static_cast<double>(folds));
    sel.feasible_all_folds[k] =
        std::all_of(feasible[k].begin(), feasible[k].end(), [](bool b) { return b; });
  }

  // min-CV: smallest mean risk, ties to the larger gamma.
  size_t best = 0;
  for (size_t k = 1; k < g; ++k)
    if (sel.cv_mean[k] <= sel.cv_mean[best]) best = k;
  sel.chosen_min_cv = grid[best];

  // 1SE: largest gamma below the min-CV point whose risk is at least one
  // standard error worse, trading variance for a tighter bias constraint.
  // Candidates must still beat the risk 0 of the empty solution.
  const double bar = sel.cv_mean[best] + sel.cv_se[best];
  sel.one_se_fell_back = true;
  sel.chosen_one_se = sel.chosen_min_cv;
  for (size_t k = best; k-- > 0;) {
    if (sel.cv_mean[k] >= bar && sel.cv_mean[k] < 0.0) {
      sel.chosen_one_se = grid[k];
      sel.one_se_fell_back = false;
      break;
    }
  }

  for (size_t k = 0; k < g; ++k) {
    if (sel.feasible_all_folds[k]) {
      sel.chosen_min_feas = grid[k];
      break;
    }
  }
  return sel;
}

GammaSelection cv_gamma(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                        const TuningConfig& cfg) {
  if (cfg.folds < 2) throw ValidationError("cv_gamma requires folds >= 2");
  const Index n = X.rows();
  if (n < cfg.folds) throw ValidationError("cv_gamma: more folds than rows");
  std::vector<Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::mt19937_64 rng(cfg.seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold_of(static_cast<size_t>(n));
  for (size_t k = 0; k < perm.size(); ++k)
    fold_of[static_cast<size_t>(perm[k])] = static_cast<int>(k % static_cast<size_t>(cfg.folds));
  GammaSelection sel =
      cv_gamma_folds(X, pi_hat, x, fold_of, gamma_grid(n, x, cfg.points), cfg.dual);
  sel.seed = cfg.seed;
  return sel;
}

double select(const GammaSelection& selection, GammaRule rule) {
  switch (rule) {
    case GammaRule::MinCv: return selection.chosen_min_cv;
    case GammaRule::OneSe: return selection.chosen_one_se;
    case GammaRule::MinFeas:
      if (!selection.chosen_min_feas)
        throw NumericalError("primal program infeasible on every grid point under min-feas");
      return *selection.chosen_min_feas;
  }
  throw ValidationError("unknown gamma rule value");
}

}  // namespace debias
