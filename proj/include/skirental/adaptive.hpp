#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "skirental/bayes_policy.hpp"
#include "skirental/prior.hpp"

namespace skirental {

/// alpha_r = min(1, sqrt(ln M / r)).
double learning_rate(std::int64_t round, Day horizon);

struct AdaptiveState {
  std::int64_t round = 1;
  DiscretePrior prior;
  double cumulative_regret = 0.0;

  /// Round 1 with a uniform prior over the whole horizon.
  static AdaptiveState initial(Day horizon);
};

struct RoundResult {
  std::int64_t round = 0;
  double alpha = 0.0;
  DecisionOutcome decision;
  double cost = 0.0;
  double opt = 0.0;
  double regret = 0.0;
  double cumulative_regret = 0.0;
};

/// Decides with the current prior, charges realized cost against min(T, b),
/// then moves the prior toward the observed season length:
/// pi <- (1 - alpha) pi + alpha 1[k = T]. `alpha` defaults to
/// learning_rate(round, M).
std::pair<RoundResult, AdaptiveState> adaptive_round(const AdaptiveState& state,
                                                     Day season_length, BuyCost b,
                                                     std::optional<double> alpha = std::nullopt);

struct RegretTrajectory {
  std::vector<RoundResult> rounds;
  /// Smallest C with cumulative regret <= C sqrt(r ln M) for every prefix r.
  double fitted_constant = 0.0;
};

/// Runs R rounds with season lengths drawn i.i.d. from `truth`, starting
/// from a uniform prior. Deterministic given the seed.
RegretTrajectory run_adaptive(std::int64_t rounds, const PriorFamilySpec& truth, BuyCost b,
                              std::uint64_t seed);

/// CSV with columns round,alpha,cost,opt,regret,cum_regret.
void write_regret_csv(const std::filesystem::path& path, const RegretTrajectory& trajectory);

/// Softmax prior pi_k(x) ∝ exp(theta_k . phi(x)) over k = 1..M.
class ContextModel {
 public:
  using FeatureMap = std::function<std::vector<double>(const std::vector<double>&)>;

  /// `theta[k-1]` is the parameter vector of day k; all must have the same
  /// dimension as the feature map output.
  ContextModel(FeatureMap features, std::vector<std::vector<double>> theta);

  /// Identity features with theta_k = k * slope (d = 1); larger contexts
  /// tilt mass toward longer seasons.
  static ContextModel linear_tilt(Day horizon, double slope);

  Day horizon() const noexcept { return static_cast<Day>(theta_.size()); }
  std::vector<double> features(const std::vector<double>& context) const {
    return features_(context);
  }
  const std::vector<std::vector<double>>& theta() const noexcept { return theta_; }

 private:
  FeatureMap features_;
  std::vector<std::vector<double>> theta_;
};

/// Max-shifted softmax; throws DimensionMismatch when phi(x) and theta_k
/// disagree in length.
DiscretePrior contextual_prior(const ContextModel& model, const std::vector<double>& context);

}  // namespace skirental
