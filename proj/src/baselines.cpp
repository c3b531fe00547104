#include "skirental/baselines.hpp"

#include <cmath>

#include <fmt/format.h>

namespace skirental {

Day ceil_day(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<Day>(nearest);
  return static_cast<Day>(std::ceil(x));
}

DecisionOutcome deterministic_threshold(BuyCost b) { return {ceil_day(b.value()), {}}; }

RandomizedStrategy::RandomizedStrategy(BuyCost b, std::uint64_t seed)
    : buy_cost_(b), seed_(seed) {
  const Day days = ceil_day(b.value());
  const double log_base = std::log1p(-1.0 / b.value());
  pmf_.resize(static_cast<std::size_t>(days));
  double total = 0.0;
  for (Day j = 1; j <= days; ++j) {
    pmf_[j - 1] = std::exp((b.value() - j) * log_base);
    total += pmf_[j - 1];
  }
  for (double& q : pmf_) q /= total;
}

DecisionOutcome RandomizedStrategy::sample(Rng& rng) const {
  return {static_cast<Day>(sample_index(pmf_, rng)) + 1, {}};
}

DecisionOutcome RandomizedStrategy::sample() const {
  Rng rng(seed_);
  return sample(rng);
}

double RandomizedStrategy::expected_cost(Day season_length) const {
  double total = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    total += pmf_[i] * realized_cost(static_cast<Day>(i) + 1, season_length, buy_cost_);
  }
  return total;
}

double RandomizedStrategy::expected_ratio(Day season_length) const {
  return expected_cost(season_length) / offline_cost(season_length, buy_cost_);
}

DecisionOutcome randomized_threshold(BuyCost b, std::uint64_t seed) {
  return RandomizedStrategy(b, seed).sample();
}

DecisionOutcome point_prediction_policy(double predicted, BuyCost b, Day horizon) {
  if (!std::isfinite(predicted)) {
    throw Error(ErrorCode::kInvalidParams, "prediction is not finite");
  }
  return {predicted >= b.value() ? 1 : horizon + 1, {}};
}

DecisionOutcome augmented_threshold_policy(double predicted, BuyCost b, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw Error(ErrorCode::kInvalidLambda, fmt::format("lambda={} outside (0, 1]", lambda));
  }
  if (!std::isfinite(predicted)) {
    throw Error(ErrorCode::kInvalidParams, "prediction is not finite");
  }
  const double threshold = predicted >= b.value() ? lambda * b.value() : b.value() / lambda;
  return {ceil_day(threshold), {}};
}

}  // namespace skirental
