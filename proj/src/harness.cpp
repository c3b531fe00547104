#include "skirental/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "skirental/baselines.hpp"
#include "skirental/fusion.hpp"
#include "skirental/prior_io.hpp"
#include "skirental/sampling.hpp"

namespace skirental {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double draw_prediction(const PredictionNoise& noise, Day season_length, Day horizon, Rng& rng) {
  const double t = static_cast<double>(season_length);
  const double raw = sample_normal(noise.bias * t, noise.relative_sd * t, rng);
  return std::clamp(raw, 1.0, static_cast<double>(horizon));
}

nlohmann::json noise_json(const PredictionNoise& noise) {
  return {{"bias", noise.bias}, {"relative_sd", noise.relative_sd}};
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  return out;
}

}  // namespace

std::string policy_name(const PolicySpec& policy) {
  return std::visit(Overloaded{
                        [](const BayesianPolicy&) { return std::string("bayesian"); },
                        [](const DeterministicPolicy&) { return std::string("deterministic"); },
                        [](const RandomizedPolicy&) { return std::string("randomized"); },
                        [](const PointPredictionPolicy&) { return std::string("point_prediction"); },
                        [](const AugmentedPolicy&) { return std::string("augmented_threshold"); },
                        [](const PredictiveBayesianPolicy&) {
                          return std::string("bayesian_prediction");
                        },
                    },
                    policy);
}

nlohmann::json describe(const PolicySpec& policy) {
  nlohmann::json out = {{"name", policy_name(policy)}};
  std::visit(Overloaded{
                 [&](const BayesianPolicy& p) {
                   out["assumed_prior"] =
                       p.assumed.family() ? format_family(p.assumed.family()->family) : "explicit";
                 },
                 [](const DeterministicPolicy&) {},
                 [](const RandomizedPolicy&) {},
                 [&](const PointPredictionPolicy& p) { out["noise"] = noise_json(p.noise); },
                 [&](const AugmentedPolicy& p) {
                   out["lambda"] = p.lambda;
                   out["noise"] = noise_json(p.noise);
                 },
                 [&](const PredictiveBayesianPolicy& p) { out["noise"] = noise_json(p.noise); },
             },
             policy);
  return out;
}

TrialBatch run_trials(const PriorFamilySpec& truth, const PolicySpec& policy, BuyCost b,
                      std::int64_t n_trials, std::uint64_t base_seed) {
  if (n_trials < 1) throw Error(ErrorCode::kInvalidParams, fmt::format("n_trials {} < 1", n_trials));
  const DiscretePrior truth_prior = build_prior(truth);
  const Day horizon = truth_prior.horizon();
  const std::string name = policy_name(policy);

  // Policies whose decision does not depend on the trial are decided once.
  std::optional<Day> fixed_day;
  if (const auto* bayes = std::get_if<BayesianPolicy>(&policy)) {
    fixed_day = purchase_day(bayes->assumed, b).purchase_day;
  } else if (std::holds_alternative<DeterministicPolicy>(policy)) {
    fixed_day = deterministic_threshold(b).purchase_day;
  }
  const std::optional<RandomizedStrategy> randomized =
      std::holds_alternative<RandomizedPolicy>(policy)
          ? std::optional<RandomizedStrategy>(RandomizedStrategy(b, base_seed))
          : std::nullopt;

  TrialBatch batch;
  batch.config = {{"truth", format_family(truth.family)},
                  {"horizon", truth.horizon},
                  {"buy_cost", b.value()},
                  {"n_trials", n_trials},
                  {"base_seed", base_seed},
                  {"policy", describe(policy)}};
  batch.trials.reserve(static_cast<std::size_t>(n_trials));

  for (std::int64_t i = 0; i < n_trials; ++i) {
    TrialRecord record;
    record.trial = i;
    record.seed = base_seed + static_cast<std::uint64_t>(i);
    record.policy = name;
    Rng rng(record.seed);
    record.season_length = sample_day(truth_prior, rng);

    if (fixed_day) {
      record.purchase_day = *fixed_day;
    } else if (randomized) {
      record.purchase_day = randomized->sample(rng).purchase_day;
    } else if (const auto* point = std::get_if<PointPredictionPolicy>(&policy)) {
      const double predicted = draw_prediction(point->noise, record.season_length, horizon, rng);
      record.purchase_day = point_prediction_policy(predicted, b, horizon).purchase_day;
    } else if (const auto* augmented = std::get_if<AugmentedPolicy>(&policy)) {
      const double predicted =
          draw_prediction(augmented->noise, record.season_length, horizon, rng);
      record.purchase_day =
          augmented_threshold_policy(predicted, b, augmented->lambda).purchase_day;
    } else if (const auto* predictive = std::get_if<PredictiveBayesianPolicy>(&policy)) {
      const double predicted =
          draw_prediction(predictive->noise, record.season_length, horizon, rng);
      record.purchase_day =
          purchase_day(prediction_to_prior(predicted, predictive->noise.relative_sd, horizon), b)
              .purchase_day;
    }

    record.cost = realized_cost(record.purchase_day, record.season_length, b);
    record.opt = offline_cost(record.season_length, b);
    record.ratio = record.cost / record.opt;
    batch.trials.push_back(std::move(record));
  }
  return batch;
}

double nearest_rank_percentile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyBatch, "no values");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(
      std::max(1.0, std::ceil(q * static_cast<double>(values.size()) - 1e-9)));
  return values[std::min(rank, values.size()) - 1];
}

MetricsSummary summarize(const TrialBatch& batch, double rho) {
  if (batch.trials.empty()) throw Error(ErrorCode::kEmptyBatch, "batch has no trials");
  MetricsSummary s;
  s.policy = batch.trials.front().policy;
  s.n = static_cast<std::int64_t>(batch.trials.size());
  const double n = static_cast<double>(s.n);

  std::vector<double> ratios;
  ratios.reserve(batch.trials.size());
  double ratio_sum = 0.0;
  double cost_sum = 0.0;
  double opt_sum = 0.0;
  std::int64_t successes = 0;
  for (const auto& t : batch.trials) {
    ratios.push_back(t.ratio);
    ratio_sum += t.ratio;
    cost_sum += t.cost;
    opt_sum += t.opt;
    if (t.ratio <= rho) ++successes;
  }
  s.mean_cr = ratio_sum / n;

  double ratio_ss = 0.0;
  double residual_ss = 0.0;
  s.ecr_empirical = cost_sum / opt_sum;
  for (const auto& t : batch.trials) {
    ratio_ss += (t.ratio - s.mean_cr) * (t.ratio - s.mean_cr);
    const double residual = t.cost - s.ecr_empirical * t.opt;
    residual_ss += residual * residual;
  }
  const double sd = s.n > 1 ? std::sqrt(ratio_ss / (n - 1.0)) : 0.0;
  const double half_width = 1.96 * sd / std::sqrt(n);
  s.ci_lo = s.mean_cr - half_width;
  s.ci_hi = s.mean_cr + half_width;
  s.p95 = nearest_rank_percentile(std::move(ratios), 0.95);
  s.success_rate = static_cast<double>(successes) / n;
  const double mean_opt = opt_sum / n;
  s.ecr_se = s.n > 1 ? std::sqrt(residual_ss / (n - 1.0) / n) / mean_opt : 0.0;
  return s;
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialBatch>& batches) {
  auto out = open_output(path);
  out << "trial,seed,T,policy,t_star,cost,opt,ratio\n";
  for (const auto& batch : batches) {
    for (const auto& t : batch.trials) {
      out << fmt::format("{},{},{},{},{},{:.12g},{:.12g},{:.12g}\n", t.trial, t.seed,
                         t.season_length, t.policy, t.purchase_day, t.cost, t.opt, t.ratio);
    }
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<MetricsSummary>& summaries) {
  auto out = open_output(path);
  out << "policy,mean_cr,ci_lo,ci_hi,p95,success_rate,ecr_empirical\n";
  for (const auto& s : summaries) {
    out << fmt::format("{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}\n", s.policy,
                       s.mean_cr, s.ci_lo, s.ci_hi, s.p95, s.success_rate, s.ecr_empirical);
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

}  // namespace skirental
