#include "debias/stats.hpp"

#include "debias/types.hpp"

#include <algorithm>
#include <cmath>

namespace debias {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

// Acklam's rational approximation, |relative error| < 1.15e-9.
double quantile_initial(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ValidationError("normal_quantile requires p in (0, 1)");
  double z = quantile_initial(p);
  // One Halley step against the exact CDF polishes to near machine precision.
  const double inv_sqrt_2pi = 0.3989422804014326779;
  for (int it = 0; it < 2; ++it) {
    const double e = normal_cdf(z) - p;
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * z * z);
    if (pdf <= 0.0) break;
    const double u = e / pdf;
    z -= u / (1.0 + 0.5 * z * u);
  }
  return z;
}

KsResult ks_test_standard_normal(std::vector<double> sample) {
  const size_t n = sample.size();
  if (n == 0) throw ValidationError("KS test requires a non-empty sample");
  std::sort(sample.begin(), sample.end());
  double d_stat = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double f = normal_cdf(sample[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d_stat = std::max({d_stat, hi, lo});
  }
  // Asymptotic tail: P(sqrt(n) D > t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
  const double t = std::sqrt(static_cast<double>(n)) * d_stat;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
    p += term;
    if (std::abs(term) < 1e-16) break;
  }
  p = std::clamp(p, 0.0, 1.0);
  return KsResult{d_stat, p};
}

}  // namespace debias
