#ifndef DEBIAS_TYPES_HPP_
#define DEBIAS_TYPES_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace debias {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
using Index = Eigen::Index;

/// Thrown when an input violates a documented precondition or invariant.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation cannot produce a usable result
/// (degenerate fit, infeasible program, negative variance estimate, ...).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A pipeline stage failure; carries the stage name for diagnosis.
struct PipelineError : NumericalError {
  PipelineError(std::string stage_name, const std::string& what)
      : NumericalError("[" + stage_name + "] " + what), stage(std::move(stage_name)) {}
  std::string stage;
};

/// Observations (Y_i, R_i, X_i): outcome, missingness indicator, covariate row.
/// Outcomes with R_i = 0 are never read by any estimator; they must still be
/// finite (callers substitute 0 for absent values).
class Dataset {
 public:
  Dataset(Vector outcomes, IntVector missing_mask, Matrix covariates);

  Index n() const { return covariates_.rows(); }
  Index dim() const { return covariates_.cols(); }
  Index n_complete() const { return n_complete_; }

  const Vector& outcomes() const { return outcomes_; }
  const IntVector& mask() const { return mask_; }
  const Matrix& covariates() const { return covariates_; }

 private:
  Vector outcomes_;
  IntVector mask_;
  Matrix covariates_;
  Index n_complete_ = 0;
};

/// Covariate vector at which the regression function x'beta_0 is inferred.
class QueryPoint {
 public:
  explicit QueryPoint(Vector x);

  Index dim() const { return x_.size(); }
  const Vector& coords() const { return x_; }

 private:
  Vector x_;
};

/// Lasso pilot regression output: coefficients and noise-level estimate.
struct PilotFit {
  Vector beta_hat;
  double sigma_hat = 0.0;  // > 0
  double lambda = 0.0;     // penalty at which beta_hat was fit
  int iterations = 0;      // outer sigma-update iterations
  bool converged = true;
  bool sigma_floored = false;  // sigma-update hit the interpolation floor
  std::vector<Index> frozen_columns;  // zero complete-case sum of squares
  long monotonicity_violations = 0;
};

/// Estimated propensity scores pi_hat_i = P(R_i = 1 | X_i), with the fitted
/// coefficients when produced by the penalized logistic path.
struct PropensityEstimate {
  Vector pi_hat;
  std::optional<Vector> theta_hat;
  std::optional<double> zeta;
  bool degenerate = false;  // single-class mask, constant fit returned
  bool converged = true;
  uint64_t cv_seed = 0;  // fold-assignment seed when zeta came from CV
  long monotonicity_violations = 0;
};

/// Solution of the debiasing program at one (x, gamma): dual vector, derived
/// observation weights, and feasibility diagnostics for the primal program.
struct DebiasSolution {
  Vector ell_hat;
  Vector weights;  // w_i = -X_i' ell_hat / (2 sqrt(n)), always derived
  double gamma = 0.0;
  double dual_objective = 0.0;
  bool primal_feasible = false;
  double constraint_sup_norm = 0.0;
  bool converged = true;
  int sweeps = 0;
  std::vector<Index> frozen_coordinates;  // nonpositive curvature, pinned at 0
  bool nonpositive_pi_warning = false;
  long monotonicity_violations = 0;  // objective increases across CD sweeps
};

/// Point estimate, variance estimate and confidence interval for m_0(x).
struct InferenceResult {
  double m_hat = 0.0;
  double variance_hat = 0.0;  // sum_i pi_hat_i w_i^2
  double sigma_used = 1.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double level = 0.95;
};

/// Complete-case rows (R_i = 1) with matching outcomes, original order kept.
struct CompleteCases {
  Matrix covariates;
  Vector outcomes;
  std::vector<Index> rows;  // indices into the source Dataset
};

CompleteCases complete_case_view(const Dataset& data);

/// Inner product x'beta; dimensions must agree.
double regression_value(const QueryPoint& x, const Vector& beta);

}  // namespace debias

#endif  // DEBIAS_TYPES_HPP_
