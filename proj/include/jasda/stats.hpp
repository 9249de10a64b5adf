#pragma once

#include "jasda/rng.hpp"

namespace jasda {

// Standard normal CDF.
double normal_cdf(double z);

// Standard normal quantile (inverse CDF), argument in (0, 1).
// Rational approximation refined with one Halley step; absolute error
// well below 1e-12 over the open interval.
double normal_quantile(double p);

// Quantile of a normal(mean, std) truncated to [lower, +inf).
// std == 0 degenerates to max(mean, lower).
double truncated_normal_quantile(double mean, double std_dev, double lower,
                                 double p);

// One draw from a normal(mean, std) truncated to [lower, +inf), via
// inverse-CDF on a uniform from the supplied stream (portable).
double sample_truncated_normal(SplitMix64& rng, double mean, double std_dev,
                               double lower);

}  // namespace jasda
