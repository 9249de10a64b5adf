#include "jasda/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jasda {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2Pi = 2.5066282746310002;

// Acklam's rational approximation to the standard normal quantile.
double acklam_quantile(double p) {
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
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r +
            1.0);
  }
  double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }
  double x = acklam_quantile(p);
  // One Halley refinement against the exact CDF.
  double e = normal_cdf(x) - p;
  double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

double truncated_normal_quantile(double mean, double std_dev, double lower,
                                 double p) {
  if (std_dev < 0.0) {
    throw std::invalid_argument("truncated_normal_quantile: negative std");
  }
  if (std_dev == 0.0) {
    return std::max(mean, lower);
  }
  double f_lower = normal_cdf((lower - mean) / std_dev);
  if (f_lower >= 1.0) {
    // Entire mass below the truncation point; everything collapses onto it.
    return lower;
  }
  double p_adj = f_lower + p * (1.0 - f_lower);
  if (p_adj >= 1.0) {
    p_adj = std::nextafter(1.0, 0.0);
  }
  return mean + std_dev * normal_quantile(p_adj);
}

double sample_truncated_normal(SplitMix64& rng, double mean, double std_dev,
                               double lower) {
  if (std_dev == 0.0) {
    return std::max(mean, lower);
  }
  return truncated_normal_quantile(mean, std_dev, lower, rng.next_open01());
}

}  // namespace jasda
