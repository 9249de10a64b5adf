#include "jasda/core.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jasda {

namespace {
double sum_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

bool any_negative(const std::vector<double>& v) {
  for (double x : v) {
    if (x < 0.0) return true;
  }
  return false;
}
}  // namespace

PolicyParams validate_policy(const PolicyParams& params) {
  if (!(params.lambda >= 0.0 && params.lambda <= 1.0)) {
    throw std::invalid_argument("lambda out of range");
  }
  if (any_negative(params.alpha)) {
    throw std::invalid_argument("alpha entry negative");
  }
  if (sum_of(params.alpha) > 1.0 + 1e-12) {
    throw std::invalid_argument("alpha sum exceeds 1");
  }
  if (any_negative(params.beta)) {
    throw std::invalid_argument("beta entry negative");
  }
  if (sum_of(params.beta) > 1.0 + 1e-12) {
    throw std::invalid_argument("beta sum exceeds 1");
  }
  if (!(params.theta > 0.0 && params.theta < 1.0)) {
    throw std::invalid_argument("theta out of range");
  }
  if (params.tau_min <= 0) {
    throw std::invalid_argument("tau_min not positive");
  }
  if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) {
    throw std::invalid_argument("gamma out of range");
  }
  if (!(params.kappa > 0.0)) {
    throw std::invalid_argument("kappa not positive");
  }
  if (any_negative(params.verification_weights)) {
    throw std::invalid_argument("verification weight negative");
  }
  if (std::fabs(sum_of(params.verification_weights) - 1.0) > 1e-12) {
    throw std::invalid_argument("verification weights do not sum to 1");
  }
  if (params.age_horizon <= 0) {
    throw std::invalid_argument("age_horizon not positive");
  }
  if (params.lead_time < 0) {
    throw std::invalid_argument("lead_time negative");
  }
  return params;
}

}  // namespace jasda
