#ifndef DEBIAS_SIMGEN_HPP_
#define DEBIAS_SIMGEN_HPP_

#include "debias/inference.hpp"
#include "debias/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace debias {

enum class CovarianceKind { CirculantSymmetric, ToeplitzAr, Identity };
enum class BetaKind { Sparse, Dense, PseudoDense };
enum class QueryKind { X1, X2, X3, X4 };
enum class NoiseKind { Gaussian, Laplace, StudentT2 };
enum class MissingKind { MarLogistic, MarProbitQuadratic, Mcar };

struct SimDesign {
  Index n = 200;
  Index d = 50;
  CovarianceKind covariance = CovarianceKind::Identity;
  BetaKind beta_design = BetaKind::Sparse;
  QueryKind query_design = QueryKind::X1;
  NoiseKind noise = NoiseKind::Gaussian;
  MissingKind missingness = MissingKind::Mcar;
  double mcar_p = 0.7;  // P(R = 1) under Mcar
  int replications = 1;
  uint64_t seed = 0;
};

Matrix cov_circulant_symmetric(Index d);
Matrix cov_toeplitz_ar(Index d);
Matrix covariance_matrix(CovarianceKind kind, Index d);

/// sparse: first five entries sqrt(5); dense: entries 1/sqrt(k) rescaled to
/// l2 norm 5; pseudo-dense: entries 1/k rescaled to l2 norm 5.
Vector beta_design(BetaKind kind, Index d);

/// x1 = e_1; x2 = (1, 1/2, 1/4, 0, 0, 0, 1/2, 1/8, 0, ...); x3 = e_100;
/// x4 = (1, 1/2^2, ..., 1/d^2) except (1, 1/2, ..., 1/d) under ToeplitzAr.
QueryPoint query_design(QueryKind kind, Index d, CovarianceKind covariance);

/// P(R = 1 | X) = 1 / (1 + exp(-1 + X_7 - X_8)), with 1-based indexing.
double mar_logistic_prob(const Vector& x_row);

/// Degree-<=2 expansion of the first eight coordinates: 8 linear terms,
/// 8 squares, then the 28 pairwise products in lexicographic order.
Vector probit_quadratic_features(const Vector& x_row);

/// Phi(-4 + sum of the 44 features above).
double mar_probit_quadratic(const Vector& x_row);

double noise_sample(NoiseKind kind, std::mt19937_64& rng);

struct Replication {
  Dataset data;
  double m0 = 0.0;  // x' beta0
  Vector true_pi;
  Vector beta0;
};

/// Draws one dataset: X rows ~ N(0, Sigma), Y = X beta0 + eps, R from the
/// configured mechanism; outcomes with R = 0 are stored as 0. chol, when
/// given, must be the lower Cholesky factor of the design covariance.
Replication gen_replication(const SimDesign& design, uint64_t rep_index,
                            const Matrix* chol = nullptr);

struct RepRecord {
  int rep = 0;
  double m_hat = 0.0;
  double m0 = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  double sigma_hat = 0.0;
  double variance_hat = 0.0;
  double gamma = 0.0;
  double studentized = 0.0;
  bool covered = false;
  bool failed = false;
  std::string error;
};

struct SimMetrics {
  double avg_bias = 0.0;    // mean |m_hat - m0| over successful replications
  double coverage = 0.0;    // fraction of CIs containing m0
  double avg_length = 0.0;  // mean CI length
  long n_fail = 0;
  std::vector<RepRecord> records;
  std::vector<double> studentized;  // sqrt(n)(m_hat - m0) / (sigma_hat sqrt(variance_hat))
  long monotonicity_violations = 0;
};

enum class PropensityChoice { LogisticLassoCv, OracleTruth };

std::string to_string(CovarianceKind kind);
std::string to_string(BetaKind kind);
std::string to_string(QueryKind kind);
std::string to_string(NoiseKind kind);
std::string to_string(MissingKind kind);
CovarianceKind covariance_from_string(const std::string& name);
BetaKind beta_from_string(const std::string& name);
QueryKind query_from_string(const std::string& name);
NoiseKind noise_from_string(const std::string& name);
MissingKind missing_from_string(const std::string& name);

/// Runs the pipeline on `design.replications` independent datasets. Each
/// replication is seeded by (design.seed, replication index) so results do
/// not depend on scheduling; failures are recorded and excluded.
SimMetrics run_monte_carlo(const SimDesign& design, const PipelineConfig& base_cfg,
                           PropensityChoice choice = PropensityChoice::LogisticLassoCv,
                           int threads = 1);

}  // namespace debias

#endif  // DEBIAS_SIMGEN_HPP_
