#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "skirental/bayes_policy.hpp"
#include "skirental/sampling.hpp"

namespace skirental {

/// Smallest integer >= x, ignoring representation error within 1e-12
/// relative (so 0.7 * 100 maps to day 70, not 71).
Day ceil_day(double x);

/// Buy on day ceil(b).
DecisionOutcome deterministic_threshold(BuyCost b);

/// Classical randomized rent-or-buy: buy at the start of day j with
/// probability q_j proportional to (1 - 1/b)^(b - j), j = 1..ceil(b).
class RandomizedStrategy {
 public:
  RandomizedStrategy(BuyCost b, std::uint64_t seed);

  std::span<const double> threshold_pmf() const noexcept { return pmf_; }
  std::uint64_t seed() const noexcept { return seed_; }
  BuyCost buy_cost() const noexcept { return buy_cost_; }

  /// Draws a threshold day with the caller's engine.
  DecisionOutcome sample(Rng& rng) const;
  /// Draws a threshold day from an engine seeded with seed().
  DecisionOutcome sample() const;

  /// Exact E[cost | T] summed over the threshold pmf.
  double expected_cost(Day season_length) const;
  double expected_ratio(Day season_length) const;

 private:
  BuyCost buy_cost_;
  std::uint64_t seed_;
  std::vector<double> pmf_;
};

DecisionOutcome randomized_threshold(BuyCost b, std::uint64_t seed);

/// Buy on day 1 when the predicted length reaches b, otherwise never
/// (reported as horizon + 1).
DecisionOutcome point_prediction_policy(double predicted, BuyCost b, Day horizon);

/// Prediction-dependent threshold stand-in: ceil(lambda b) when the
/// prediction reaches b, ceil(b / lambda) otherwise. lambda in (0, 1].
DecisionOutcome augmented_threshold_policy(double predicted, BuyCost b, double lambda);

}  // namespace skirental
