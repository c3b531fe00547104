#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "skirental/harness.hpp"
#include "skirental/prior.hpp"

namespace skirental {

struct ExperimentConfig {
  double buy_cost = 100.0;
  Day horizon = 500;
  std::int64_t n_trials = 10000;
  std::uint64_t base_seed = 42;
  double success_threshold = kDefaultSuccessThreshold;
  /// lambda of the augmented threshold stand-in.
  double lambda = 0.5;
  /// Relative prediction noise (beta) for prediction-driven policies.
  double prediction_noise = 0.3;

  nlohmann::json to_json() const;
};

// --- Robustness to a misspecified prior ------------------------------------

struct MisspecificationCell {
  std::string regime;
  double cv = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  std::string error_type;  // none | mean | variance | shape
  std::string perturbation;
  double tv = 0.0;
  Day purchase_day = 0;
  double mean_cr = 0.0;
  double ecr_empirical = 0.0;
  double ecr_exact = 0.0;
  /// Exact expected cost relative to the well-specified policy, minus one.
  double cost_increase = 0.0;
  std::vector<double> ratios;
};

struct Q1Report {
  std::vector<MisspecificationCell> cells;
  double mean_cost_increase = 0.0;
  double worst_cost_increase = 0.0;
};

/// Gaussian truths with mu = 100 and sigma / mu in {0.42, 0.33, 0.31}; the
/// Bayesian policy runs on mean-shifted, variance-scaled and shape-swapped
/// copies of the truth.
Q1Report experiment_q1(const ExperimentConfig& config);

// --- Perfect prior knowledge ----------------------------------------------

struct FamilyResult {
  std::string family;
  std::string spec;
  std::vector<MetricsSummary> summaries;
};

struct Q2Report {
  std::vector<FamilyResult> families;
};

/// Truths uniform(500), gaussian(100, 30) and the mean-matched discrete
/// exponential geometric(1 - e^-0.01); the Bayesian policy assumes the truth.
Q2Report experiment_q2(const ExperimentConfig& config);

/// Parameters of the discrete stand-in for Exp(rate).
GeometricFamily discrete_exponential(double rate, Day horizon);

// --- Noisy single predictions ---------------------------------------------

struct BiasRow {
  double alpha = 1.0;
  MetricsSummary bayesian;
  MetricsSummary point;
};

struct Q3Report {
  Day season_length = 100;
  std::vector<BiasRow> rows;
};

inline constexpr double kQ3Biases[] = {0.5, 0.8, 1.0, 1.2, 1.5, 2.0};

/// Season length fixed at 100; predictions T_hat ~ N(alpha T, (beta T)^2).
Q3Report experiment_q3(const ExperimentConfig& config);

// --- Multi-modal priors ---------------------------------------------------

struct MultimodalCase {
  std::string name;
  std::string spec;
  bool log_concave = false;
  Day myopic_day = 0;
  Day oracle_day = 0;
  double myopic_cost = 0.0;
  double oracle_cost = 0.0;
  double ecr = 0.0;
  std::vector<double> pmf;
  std::vector<double> survival;
  /// NaN where no mass remains.
  std::vector<double> expected_rent;
};

struct Q4Report {
  std::vector<MultimodalCase> cases;
};

std::vector<std::pair<std::string, PriorFamilySpec>> multimodal_priors(Day horizon);

Q4Report experiment_q4(const ExperimentConfig& config);

// --- Output ---------------------------------------------------------------

/// Each writer creates `dir` if needed and returns the files it wrote.
std::vector<std::filesystem::path> write_q1(const std::filesystem::path& dir, const Q1Report& r);
std::vector<std::filesystem::path> write_q2(const std::filesystem::path& dir, const Q2Report& r);
std::vector<std::filesystem::path> write_q3(const std::filesystem::path& dir, const Q3Report& r);
std::vector<std::filesystem::path> write_q4(const std::filesystem::path& dir, const Q4Report& r);

}  // namespace skirental
