#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "skirental/bayes_policy.hpp"
#include "skirental/prior.hpp"

namespace skirental {

/// Forecast model for prediction-driven policies:
/// T_hat ~ N(bias * T, (relative_sd * T)^2), clamped into [1, M].
struct PredictionNoise {
  double bias = 1.0;
  double relative_sd = 0.3;
};

struct BayesianPolicy {
  DiscretePrior assumed;
};
struct DeterministicPolicy {};
struct RandomizedPolicy {};
struct PointPredictionPolicy {
  PredictionNoise noise;
};
/// Prediction-dependent threshold stand-in for a
/// learning-augmented baseline.
struct AugmentedPolicy {
  double lambda = 0.5;
  PredictionNoise noise;
};
/// Bayesian rule on prediction_to_prior(T_hat, noise.relative_sd, M).
struct PredictiveBayesianPolicy {
  PredictionNoise noise;
};

using PolicySpec = std::variant<BayesianPolicy, DeterministicPolicy, RandomizedPolicy,
                                PointPredictionPolicy, AugmentedPolicy, PredictiveBayesianPolicy>;

std::string policy_name(const PolicySpec& policy);
nlohmann::json describe(const PolicySpec& policy);

struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  Day season_length = 0;
  std::string policy;
  Day purchase_day = 0;
  double cost = 0.0;
  double opt = 0.0;
  double ratio = 1.0;
};

struct TrialBatch {
  std::vector<TrialRecord> trials;
  nlohmann::json config;
};

/// Trial i draws from an engine seeded with base_seed + i: the season length
/// first, then any policy randomness. Different policies run with the same
/// base seed therefore face identical season lengths.
TrialBatch run_trials(const PriorFamilySpec& truth, const PolicySpec& policy, BuyCost b,
                      std::int64_t n_trials, std::uint64_t base_seed);

struct MetricsSummary {
  std::string policy;
  std::int64_t n = 0;
  double mean_cr = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double p95 = 0.0;
  double success_rate = 0.0;
  /// Ratio of means: sum(cost) / sum(opt).
  double ecr_empirical = 0.0;
  /// Delta-method standard error of ecr_empirical.
  double ecr_se = 0.0;
};

inline constexpr double kDefaultSuccessThreshold = 1.5;

/// Mean CR with a normal-approximation 95% interval, nearest-rank 95th
/// percentile and the fraction of trials with ratio <= rho.
MetricsSummary summarize(const TrialBatch& batch, double rho = kDefaultSuccessThreshold);

/// Nearest-rank percentile of unsorted values, q in (0, 1].
double nearest_rank_percentile(std::vector<double> values, double q);

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialBatch>& batches);
void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<MetricsSummary>& summaries);

}  // namespace skirental
