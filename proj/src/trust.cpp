#include "jasda/trust.hpp"

#include <cmath>
#include <stdexcept>

namespace jasda {

void note_declaration(ReliabilityState& state, double h_tilde) {
  if (!state.hist_seeded) {
    state.hist_avg = h_tilde;
    state.hist_seeded = true;
  }
}

double calibrate(double h_tilde, const ReliabilityState& state, double gamma) {
  if (!(h_tilde >= 0.0 && h_tilde <= 1.0)) {
    throw std::invalid_argument("calibrate: h_tilde out of range");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("calibrate: gamma out of range");
  }
  if (!state.hist_seeded) {
    return h_tilde;
  }
  double weight = state.verified_count > 0 ? state.rho : gamma;
  return weight * h_tilde + (1.0 - weight) * state.hist_avg;
}

std::vector<double> per_feature_error(const std::vector<double>& declared,
                                      const std::vector<double>& observed) {
  if (declared.size() != observed.size()) {
    throw std::invalid_argument("per_feature_error: dimension mismatch");
  }
  std::vector<double> errors(declared.size());
  for (std::size_t i = 0; i < declared.size(); ++i) {
    errors[i] = std::fabs(declared[i] - observed[i]);
  }
  return errors;
}

double variant_error(const std::vector<double>& per_feature,
                     const std::vector<double>& weights) {
  if (per_feature.size() != weights.size()) {
    throw std::invalid_argument("variant_error: dimension mismatch");
  }
  double sum_w = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) {
      throw std::invalid_argument("variant_error: negative weight");
    }
    sum_w += weights[i];
    acc += weights[i] * per_feature[i];
  }
  if (std::fabs(sum_w - 1.0) > 1e-12) {
    throw std::invalid_argument("variant_error: weights do not sum to 1");
  }
  if (acc < 0.0) acc = 0.0;
  if (acc > 1.0) acc = 1.0;
  return acc;
}

std::vector<double> renormalize_weights(const std::vector<double>& weights,
                                        const std::vector<bool>& observed) {
  if (weights.size() != observed.size()) {
    throw std::invalid_argument("renormalize_weights: dimension mismatch");
  }
  double kept = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (observed[i]) kept += weights[i];
  }
  if (kept <= 0.0) {
    throw std::invalid_argument("renormalize_weights: no observed feature");
  }
  std::vector<double> out(weights.size(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (observed[i]) out[i] = weights[i] / kept;
  }
  return out;
}

ReliabilityState update_reliability(const ReliabilityState& state,
                                    const VerificationRecord& record,
                                    double kappa) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("update_reliability: kappa not positive");
  }
  if (!(record.variant_error >= 0.0 && record.variant_error <= 1.0)) {
    throw std::invalid_argument("update_reliability: variant_error out of range");
  }
  ReliabilityState next = state;
  std::int64_t n = state.verified_count;
  next.mean_error = (state.mean_error * static_cast<double>(n) +
                     record.variant_error) /
                    static_cast<double>(n + 1);
  next.verified_count = n + 1;
  next.rho = std::exp(-kappa * next.mean_error);
  if (n == 0) {
    // First observation replaces the declaration-seeded placeholder.
    next.hist_avg = record.observed_utility;
  } else {
    next.hist_avg = (1.0 - kHistAvgSmoothing) * state.hist_avg +
                    kHistAvgSmoothing * record.observed_utility;
  }
  next.hist_seeded = true;
  return next;
}

}  // namespace jasda
