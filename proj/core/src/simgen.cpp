#include "debias/simgen.hpp"

#include "debias/parallel.hpp"
#include "debias/stats.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <memory>

namespace debias {
namespace {

uint64_t splitmix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 replication_engine(uint64_t master_seed, uint64_t rep_index) {
  std::seed_seq seq{static_cast<uint32_t>(master_seed), static_cast<uint32_t>(master_seed >> 32),
                    static_cast<uint32_t>(rep_index), static_cast<uint32_t>(rep_index >> 32)};
  return std::mt19937_64(seq);
}

void check_design(const SimDesign& design) {
  if (design.n < 1 || design.d < 1)
    throw ValidationError("simulation design requires n >= 1 and d >= 1");
  if (design.replications < 1)
    throw ValidationError("simulation design requires replications >= 1");
  if (design.missingness == MissingKind::Mcar &&
      !(design.mcar_p > 0.0 && design.mcar_p <= 1.0))
    throw ValidationError("MCAR probability must lie in (0, 1]");
  if ((design.missingness == MissingKind::MarLogistic ||
       design.missingness == MissingKind::MarProbitQuadratic) &&
      design.d < 8)
    throw ValidationError("MAR mechanisms use the first eight covariates; d >= 8 required");
}

}  // namespace

Matrix cov_circulant_symmetric(Index d) {
  if (d < 1) throw ValidationError("covariance dimension must be >= 1");
  Matrix sigma = Matrix::Zero(d, d);
  for (Index j = 0; j < d; ++j) {
    sigma(j, j) = 1.0;
    for (Index k = j + 1; k < d; ++k) {
      const Index lag = k - j;
      if (lag <= 5 || lag >= d - 5) {
        sigma(j, k) = 0.1;
        sigma(k, j) = 0.1;
      }
    }
  }
  return sigma;
}

Matrix cov_toeplitz_ar(Index d) {
  if (d < 1) throw ValidationError("covariance dimension must be >= 1");
  Matrix sigma(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index k = 0; k < d; ++k) sigma(j, k) = std::pow(0.9, std::abs(static_cast<double>(j - k)));
  return sigma;
}

Matrix covariance_matrix(CovarianceKind kind, Index d) {
  switch (kind) {
    case CovarianceKind::CirculantSymmetric: return cov_circulant_symmetric(d);
    case CovarianceKind::ToeplitzAr: return cov_toeplitz_ar(d);
    case CovarianceKind::Identity: return Matrix::Identity(d, d);
  }
  throw ValidationError("unknown covariance kind");
}

Vector beta_design(BetaKind kind, Index d) {
  if (d < 1) throw ValidationError("beta design dimension must be >= 1");
  Vector beta = Vector::Zero(d);
  switch (kind) {
    case BetaKind::Sparse: {
      const Index s = std::min<Index>(5, d);
      for (Index k = 0; k < s; ++k) beta[k] = std::sqrt(5.0);
      return beta;
    }
    case BetaKind::Dense: {
      for (Index k = 0; k < d; ++k) beta[k] = 1.0 / std::sqrt(static_cast<double>(k + 1));
      beta *= 5.0 / beta.norm();
      return beta;
    }
    case BetaKind::PseudoDense: {
      for (Index k = 0; k < d; ++k) beta[k] = 1.0 / static_cast<double>(k + 1);
      beta *= 5.0 / beta.norm();
      return beta;
    }
  }
  throw ValidationError("unknown beta design");
}

QueryPoint query_design(QueryKind kind, Index d, CovarianceKind covariance) {
  if (d < 1) throw ValidationError("query design dimension must be >= 1");
  Vector x = Vector::Zero(d);
  switch (kind) {
    case QueryKind::X1:
      x[0] = 1.0;
      return QueryPoint(std::move(x));
    case QueryKind::X2:
      if (d < 8) throw ValidationError("query x2 requires d >= 8");
      x[0] = 1.0;
      x[1] = 0.5;
      x[2] = 0.25;
      x[6] = 0.5;
      x[7] = 0.125;
      return QueryPoint(std::move(x));
    case QueryKind::X3:
      if (d < 100) throw ValidationError("query x3 requires d >= 100");
      x[99] = 1.0;
      return QueryPoint(std::move(x));
    case QueryKind::X4: {
      const bool inverse_linear = covariance == CovarianceKind::ToeplitzAr;
      for (Index k = 0; k < d; ++k) {
        const double kk = static_cast<double>(k + 1);
        x[k] = inverse_linear ? 1.0 / kk : 1.0 / (kk * kk);
      }
      return QueryPoint(std::move(x));
    }
  }
  throw ValidationError("unknown query design");
}

double mar_logistic_prob(const Vector& x_row) {
  if (x_row.size() < 8) throw ValidationError("MAR-logistic uses X7 and X8; d >= 8 required");
  return 1.0 / (1.0 + std::exp(-1.0 + x_row[6] - x_row[7]));
}

Vector probit_quadratic_features(const Vector& x_row) {
  if (x_row.size() < 8)
    throw ValidationError("probit-quadratic expansion requires d >= 8");
  Vector z(44);
  Index pos = 0;
  for (Index k = 0; k < 8; ++k) z[pos++] = x_row[k];
  for (Index k = 0; k < 8; ++k) z[pos++] = x_row[k] * x_row[k];
  for (Index j = 0; j < 8; ++j)
    for (Index k = j + 1; k < 8; ++k) z[pos++] = x_row[j] * x_row[k];
  return z;
}

double mar_probit_quadratic(const Vector& x_row) {
  return normal_cdf(-4.0 + probit_quadratic_features(x_row).sum());
}

double noise_sample(NoiseKind kind, std::mt19937_64& rng) {
  switch (kind) {
    case NoiseKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      return normal(rng);
    }
    case NoiseKind::Laplace: {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const double v = uniform(rng) - 0.5;
      const double scale = 1.0 / std::sqrt(2.0);
      return v >= 0.0 ? -scale * std::log1p(-2.0 * v) : scale * std::log1p(2.0 * v);
    }
    case NoiseKind::StudentT2: {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::exponential_distribution<double> exponential(1.0);  // chi^2_2 / 2
      const double z = normal(rng);
      return z / std::sqrt(exponential(rng));
    }
  }
  throw ValidationError("unknown noise kind");
}

Replication gen_replication(const SimDesign& design, uint64_t rep_index, const Matrix* chol) {
  check_design(design);
  const Index n = design.n;
  const Index d = design.d;

  Matrix chol_local;
  if (!chol && design.covariance != CovarianceKind::Identity) {
    Eigen::LLT<Matrix> llt(covariance_matrix(design.covariance, d));
    if (llt.info() != Eigen::Success)
      throw NumericalError("rejected design: covariance is not positive definite");
    chol_local = llt.matrixL();
    chol = &chol_local;
  }

  std::mt19937_64 rng = replication_engine(design.seed, rep_index);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix X(n, d);
  Vector z(d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) z[j] = normal(rng);
    if (chol)
      X.row(i) = (*chol * z).transpose();
    else
      X.row(i) = z.transpose();
  }

  const Vector beta0 = beta_design(design.beta_design, d);
  Vector y = X * beta0;
  for (Index i = 0; i < n; ++i) y[i] += noise_sample(design.noise, rng);

  Vector pi(n);
  for (Index i = 0; i < n; ++i) {
    switch (design.missingness) {
      case MissingKind::MarLogistic: pi[i] = mar_logistic_prob(X.row(i)); break;
      case MissingKind::MarProbitQuadratic: pi[i] = mar_probit_quadratic(X.row(i)); break;
      case MissingKind::Mcar: pi[i] = design.mcar_p; break;
    }
  }
  IntVector mask(n);
  for (Index i = 0; i < n; ++i) mask[i] = uniform(rng) < pi[i] ? 1 : 0;
  for (Index i = 0; i < n; ++i)
    if (mask[i] == 0) y[i] = 0.0;  // unobserved; never read downstream

  const QueryPoint x = query_design(design.query_design, d, design.covariance);
  const double m0 = x.coords().dot(beta0);
  return Replication{Dataset(std::move(y), std::move(mask), std::move(X)), m0, std::move(pi),
                     beta0};
}

std::string to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::CirculantSymmetric: return "circulant-symmetric";
    case CovarianceKind::ToeplitzAr: return "toeplitz-ar";
    case CovarianceKind::Identity: return "identity";
  }
  throw ValidationError("unknown covariance kind");
}

std::string to_string(BetaKind kind) {
  switch (kind) {
    case BetaKind::Sparse: return "sparse";
    case BetaKind::Dense: return "dense";
    case BetaKind::PseudoDense: return "pseudo-dense";
  }
  throw ValidationError("unknown beta design");
}

std::string to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::X1: return "x1";
    case QueryKind::X2: return "x2";
    case QueryKind::X3: return "x3";
    case QueryKind::X4: return "x4";
  }
  throw ValidationError("unknown query design");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Laplace: return "laplace";
    case NoiseKind::StudentT2: return "t2";
  }
  throw ValidationError("unknown noise kind");
}

std::string to_string(MissingKind kind) {
  switch (kind) {
    case MissingKind::MarLogistic: return "mar-logistic";
    case MissingKind::MarProbitQuadratic: return "mar-probit-quadratic";
    case MissingKind::Mcar: return "mcar";
  }
  throw ValidationError("unknown missingness kind");
}

CovarianceKind covariance_from_string(const std::string& name) {
  if (name == "circulant-symmetric") return CovarianceKind::CirculantSymmetric;
  if (name == "toeplitz-ar") return CovarianceKind::ToeplitzAr;
  if (name == "identity") return CovarianceKind::Identity;
  throw ValidationError("unknown covariance '" + name +
                        "' (expected circulant-symmetric, toeplitz-ar or identity)");
}

BetaKind beta_from_string(const std::string& name) {
  if (name == "sparse") return BetaKind::Sparse;
  if (name == "dense") return BetaKind::Dense;
  if (name == "pseudo-dense") return BetaKind::PseudoDense;
  throw ValidationError("unknown beta design '" + name +
                        "' (expected sparse, dense or pseudo-dense)");
}

QueryKind query_from_string(const std::string& name) {
  if (name == "x1") return QueryKind::X1;
  if (name == "x2") return QueryKind::X2;
  if (name == "x3") return QueryKind::X3;
  if (name == "x4") return QueryKind::X4;
  throw ValidationError("unknown query design '" + name + "' (expected x1, x2, x3 or x4)");
}

NoiseKind noise_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "laplace") return NoiseKind::Laplace;
  if (name == "t2") return NoiseKind::StudentT2;
  throw ValidationError("unknown noise '" + name + "' (expected gaussian, laplace or t2)");
}

MissingKind missing_from_string(const std::string& name) {
  if (name == "mar-logistic") return MissingKind::MarLogistic;
  if (name == "mar-probit-quadratic") return MissingKind::MarProbitQuadratic;
  if (name == "mcar") return MissingKind::Mcar;
  throw ValidationError("unknown missingness '" + name +
                        "' (expected mar-logistic, mar-probit-quadratic or mcar)");
}

SimMetrics run_monte_carlo(const SimDesign& design, const PipelineConfig& base_cfg,
                           PropensityChoice choice, int threads) {
  check_design(design);
  Matrix chol;
  const Matrix* chol_ptr = nullptr;
  if (design.covariance != CovarianceKind::Identity) {
    Eigen::LLT<Matrix> llt(covariance_matrix(design.covariance, design.d));
    if (llt.info() != Eigen::Success)
      throw NumericalError("rejected design: covariance is not positive definite");
    chol = llt.matrixL();
    chol_ptr = &chol;
  }
  const QueryPoint x = query_design(design.query_design, design.d, design.covariance);

  const int reps = design.replications;
  SimMetrics metrics;
  metrics.records.resize(static_cast<size_t>(reps));
  std::vector<long> violations(static_cast<size_t>(reps), 0);

  parallel_for(0, reps, threads, [&](Index rep) {
    RepRecord& rec = metrics.records[static_cast<size_t>(rep)];
    rec.rep = static_cast<int>(rep);
    try {
      const Replication r = gen_replication(design, static_cast<uint64_t>(rep), chol_ptr);
      PipelineConfig cfg = base_cfg;
      cfg.seed = splitmix64(design.seed ^ splitmix64(static_cast<uint64_t>(rep)));
      if (choice == PropensityChoice::OracleTruth)
        cfg.propensity = std::make_shared<OraclePropensity>(r.true_pi);
      const PipelineResult res = run_pipeline(r.data, x, cfg);

      rec.m_hat = res.inference.m_hat;
      rec.m0 = r.m0;
      rec.ci_lower = res.inference.ci_lower;
      rec.ci_upper = res.inference.ci_upper;
      rec.sigma_hat = res.inference.sigma_used;
      rec.variance_hat = res.inference.variance_hat;
      rec.gamma = res.solution.gamma;
      rec.covered = rec.ci_lower <= r.m0 && r.m0 <= rec.ci_upper;
      const double denom = rec.sigma_hat * std::sqrt(rec.variance_hat);
      rec.studentized = std::sqrt(static_cast<double>(design.n)) * (rec.m_hat - r.m0) / denom;
      long viol = res.solution.monotonicity_violations;
      if (res.gamma_selection) viol += res.gamma_selection->monotonicity_violations;
      violations[static_cast<size_t>(rep)] = viol;
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  });

  long n_ok = 0;
  for (const RepRecord& rec : metrics.records) {
    if (rec.failed) {
      ++metrics.n_fail;
      continue;
    }
    ++n_ok;
    metrics.avg_bias += std::abs(rec.m_hat - rec.m0);
    metrics.coverage += rec.covered ? 1.0 : 0.0;
    metrics.avg_length += rec.ci_upper - rec.ci_lower;
    if (std::isfinite(rec.studentized)) metrics.studentized.push_back(rec.studentized);
  }
  for (long v : violations) metrics.monotonicity_violations += v;
  if (n_ok > 0) {
    metrics.avg_bias /= static_cast<double>(n_ok);
    metrics.coverage /= static_cast<double>(n_ok);
    metrics.avg_length /= static_cast<double>(n_ok);
  }
  return metrics;
}

}  // namespace debias
