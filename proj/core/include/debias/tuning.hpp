#ifndef DEBIAS_TUNING_HPP_
#define DEBIAS_TUNING_HPP_

#include "debias/dual_solver.hpp"
#include "debias/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace debias {

enum class GammaRule { MinCv, OneSe, MinFeas };

GammaRule gamma_rule_from_string(const std::string& name);  // "min-cv" | "1se" | "min-feas"
std::string to_string(GammaRule rule);

/// Cross-validation summary over the gamma grid, with the chosen value under
/// each selection rule.
struct GammaSelection {
  std::vector<double> grid;  // strictly increasing, positive
  std::vector<double> cv_mean;
  std::vector<double> cv_se;
  std::vector<bool> feasible_all_folds;
  double chosen_min_cv = 0.0;
  double chosen_one_se = 0.0;
  std::optional<double> chosen_min_feas;  // empty when no grid point is feasible on all folds
  bool one_se_fell_back = false;          // no point met the 1SE condition
  int folds = 5;
  uint64_t seed = 0;
  long monotonicity_violations = 0;  // accumulated over all (gamma, fold) fits
  long nonconverged_fits = 0;
};

struct TuningConfig {
  int folds = 5;
  int points = 41;
  uint64_t seed = 0;
  DualConfig dual;
};

/// Equally spaced grid on (0, n*||x||_inf]: with spacing h = n*||x||_inf /
/// (points - 1), the zero endpoint is replaced by h/2, giving `points` values
/// {h/2, h, 2h, ..., (points-1)h}. Requires ||x||_inf > 0 and points >= 2.
std::vector<double> gamma_grid(Index n, const QueryPoint& x, int points = 41);

/// Held-out dual risk per gamma with fold_of[i] assigning row i to its fold.
/// Grid values live on the full-sample scale; each fold rescales them by its
/// row share so the penalty ratio gamma/n is held fixed across the training
/// solve and the held-out evaluation. Per-point feasibility is the
/// training-fold primal check under every fold.
GammaSelection cv_gamma_folds(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                              const std::vector<int>& fold_of, const std::vector<double>& grid,
                              const DualConfig& dual);

/// cv_gamma_folds on a seed-shuffled modulo-fold partition and the default grid.
GammaSelection cv_gamma(const Matrix& X, const Vector& pi_hat, const QueryPoint& x,
                        const TuningConfig& cfg = {});

/// The gamma chosen by `rule`; min-feas with no feasible point is an error.
double select(const GammaSelection& selection, GammaRule rule);

}  // namespace debias

#endif  // DEBIAS_TUNING_HPP_
