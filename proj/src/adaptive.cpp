#include "skirental/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "skirental/sampling.hpp"

namespace skirental {

double learning_rate(std::int64_t round, Day horizon) {
  if (round < 1) throw Error(ErrorCode::kOutOfRange, fmt::format("round {} < 1", round));
  if (horizon < 2) throw Error(ErrorCode::kOutOfRange, fmt::format("horizon {} < 2", horizon));
  return std::min(1.0, std::sqrt(std::log(static_cast<double>(horizon)) /
                                 static_cast<double>(round)));
}

AdaptiveState AdaptiveState::initial(Day horizon) {
  return {1, build_prior({UniformFamily{horizon}, horizon}), 0.0};
}

std::pair<RoundResult, AdaptiveState> adaptive_round(const AdaptiveState& state,
                                                     Day season_length, BuyCost b,
                                                     std::optional<double> alpha) {
  const Day horizon = state.prior.horizon();
  if (season_length < 1 || season_length > horizon) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("season length {} outside [1, {}]", season_length, horizon));
  }
  const double rate = alpha.value_or(learning_rate(state.round, horizon));
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidParams, fmt::format("learning rate {} outside [0, 1]", rate));
  }

  RoundResult result;
  result.round = state.round;
  result.alpha = rate;
  result.decision = purchase_day(state.prior, b);
  result.cost = realized_cost(result.decision.purchase_day, season_length, b);
  result.opt = offline_cost(season_length, b);
  result.regret = result.cost - result.opt;
  result.cumulative_regret = state.cumulative_regret + result.regret;

  if (rate == 0.0) {
    AdaptiveState next{state.round + 1, state.prior, result.cumulative_regret};
    return {std::move(result), std::move(next)};
  }
  auto masses = state.prior.dense_masses();
  for (double& m : masses) m *= 1.0 - rate;
  masses[season_length - 1] += rate;

  AdaptiveState next{state.round + 1, DiscretePrior::from_dense_weights(masses),
                     result.cumulative_regret};
  return {std::move(result), std::move(next)};
}

RegretTrajectory run_adaptive(std::int64_t rounds, const PriorFamilySpec& truth, BuyCost b,
                              std::uint64_t seed) {
  if (rounds < 1) throw Error(ErrorCode::kInvalidParams, fmt::format("rounds {} < 1", rounds));
  const DiscretePrior truth_prior = build_prior(truth);
  const Day horizon = truth_prior.horizon();
  const double log_horizon = std::log(static_cast<double>(horizon));

  Rng rng(seed);
  RegretTrajectory out;
  out.rounds.reserve(static_cast<std::size_t>(rounds));
  AdaptiveState state = AdaptiveState::initial(horizon);
  for (std::int64_t r = 1; r <= rounds; ++r) {
    auto [result, next] = adaptive_round(state, sample_day(truth_prior, rng), b);
    out.fitted_constant = std::max(
        out.fitted_constant, result.cumulative_regret / std::sqrt(static_cast<double>(r) * log_horizon));
    out.rounds.push_back(std::move(result));
    state = std::move(next);
  }
  return out;
}

void write_regret_csv(const std::filesystem::path& path, const RegretTrajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  out << "round,alpha,cost,opt,regret,cum_regret\n";
  for (const auto& r : trajectory.rounds) {
    out << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", r.round, r.alpha, r.cost,
                       r.opt, r.regret, r.cumulative_regret);
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

ContextModel::ContextModel(FeatureMap features, std::vector<std::vector<double>> theta)
    : features_(std::move(features)), theta_(std::move(theta)) {
  if (theta_.empty()) throw Error(ErrorCode::kDimensionMismatch, "no horizon parameters");
  for (const auto& row : theta_) {
    if (row.size() != theta_.front().size()) {
      throw Error(ErrorCode::kDimensionMismatch, "theta rows differ in dimension");
    }
  }
}

ContextModel ContextModel::linear_tilt(Day horizon, double slope) {
  std::vector<std::vector<double>> theta;
  theta.reserve(static_cast<std::size_t>(horizon));
  for (Day k = 1; k <= horizon; ++k) theta.push_back({slope * k});
  return ContextModel([](const std::vector<double>& x) { return x; }, std::move(theta));
}

DiscretePrior contextual_prior(const ContextModel& model, const std::vector<double>& context) {
  const std::vector<double> phi = model.features(context);
  const auto& theta = model.theta();
  if (phi.size() != theta.front().size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("feature dimension {} != parameter dimension {}", phi.size(),
                            theta.front().size()));
  }
  std::vector<double> scores(theta.size(), 0.0);
  for (std::size_t k = 0; k < theta.size(); ++k) {
    for (std::size_t j = 0; j < phi.size(); ++j) scores[k] += theta[k][j] * phi[j];
  }
  const double peak = *std::max_element(scores.begin(), scores.end());
  if (!std::isfinite(peak)) throw Error(ErrorCode::kInvalidParams, "softmax scores not finite");
  for (double& s : scores) s = std::exp(s - peak);
  return DiscretePrior::from_dense_weights(scores);
}

}  // namespace skirental
