#ifndef DEBIAS_STATS_HPP_
#define DEBIAS_STATS_HPP_

#include <vector>

namespace debias {

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile, accurate to about 1e-15 over (0, 1).
/// Throws ValidationError outside (0, 1).
double normal_quantile(double p);

struct KsResult {
  double statistic = 0.0;  // sup_z |F_n(z) - Phi(z)|
  double p_value = 1.0;    // asymptotic, two-sided
};

/// One-sample Kolmogorov-Smirnov test against the standard normal.
/// Throws ValidationError on an empty sample.
KsResult ks_test_standard_normal(std::vector<double> sample);

}  // namespace debias

#endif  // DEBIAS_STATS_HPP_
