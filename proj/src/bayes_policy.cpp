#include "skirental/bayes_policy.hpp"

#include <cmath>

#include <fmt/format.h>

namespace skirental {
namespace {

// Shared by the suffix-sum and sparse scans so both produce bit-identical
// values from identical (Z, S1) pairs.
inline double residual_from_sums(double first_moment, double mass, Day t) {
  return (first_moment - static_cast<double>(t - 1) * mass) / mass;
}

void check_day(const DiscretePrior& prior, Day t) {
  if (t < 1 || t > prior.horizon()) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("day {} outside [1, {}]", t, prior.horizon()));
  }
}

double direct_tail(const std::vector<double>& masses, Day t) {
  double tail = 0.0;
  for (auto k = static_cast<Day>(masses.size()); k >= t; --k) tail += masses[k - 1];
  return tail;
}

DecisionOutcome scan_direct(const DiscretePrior& prior, double b, bool trace) {
  const auto masses = prior.dense_masses();
  const Day horizon = prior.horizon();
  DecisionOutcome out{horizon + 1, {}};
  for (Day t = 1; t <= horizon; ++t) {
    const double z = direct_tail(masses, t);
    if (!(z > 0.0)) {
      if (trace) out.trace.push_back({t, 0.0, Action::kSeasonOver});
      return out;
    }
    double e = 0.0;
    for (Day k = t; k <= horizon; ++k) e += masses[k - 1] / z * static_cast<double>(k - t + 1);
    const bool buy = b <= e;
    if (trace) out.trace.push_back({t, e, buy ? Action::kBuy : Action::kRent});
    if (buy) {
      out.purchase_day = t;
      return out;
    }
  }
  if (trace) out.trace.push_back({horizon + 1, 0.0, Action::kSeasonOver});
  return out;
}

DecisionOutcome scan_suffix(const DiscretePrior& prior, double b, bool trace) {
  const SuffixTables tables(prior);
  const Day horizon = prior.horizon();
  DecisionOutcome out{horizon + 1, {}};
  for (Day t = 1; t <= horizon; ++t) {
    if (!(tables.remaining_mass(t) > 0.0)) {
      if (trace) out.trace.push_back({t, 0.0, Action::kSeasonOver});
      return out;
    }
    const double e = tables.expected_rent(t);
    const bool buy = b <= e;
    if (trace) out.trace.push_back({t, e, buy ? Action::kBuy : Action::kRent});
    if (buy) {
      out.purchase_day = t;
      return out;
    }
  }
  if (trace) out.trace.push_back({horizon + 1, 0.0, Action::kSeasonOver});
  return out;
}

// Between consecutive support points the posterior does not change, so
// E_rent falls by exactly one per day; only the first day of each segment
// can be the first crossing.
DecisionOutcome scan_sparse(const DiscretePrior& prior, double b, bool trace) {
  const auto points = prior.support();
  const auto n = points.size();
  std::vector<double> mass(n + 1, 0.0);
  std::vector<double> first_moment(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    mass[i] = mass[i + 1] + points[i].mass;
    first_moment[i] = first_moment[i + 1] + static_cast<double>(points[i].day) * points[i].mass;
  }
  DecisionOutcome out{prior.horizon() + 1, {}};
  Day segment_start = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = residual_from_sums(first_moment[i], mass[i], segment_start);
    const bool buy = b <= e;
    if (trace) out.trace.push_back({segment_start, e, buy ? Action::kBuy : Action::kRent});
    if (buy) {
      out.purchase_day = segment_start;
      return out;
    }
    segment_start = points[i].day + 1;
  }
  if (trace) out.trace.push_back({segment_start, 0.0, Action::kSeasonOver});
  return out;
}

}  // namespace

BuyCost::BuyCost(double value) : value_(value) {
  if (!std::isfinite(value) || !(value > 1.0)) {
    throw Error(ErrorCode::kInvalidParams, fmt::format("buy cost {} must exceed 1", value));
  }
}

SuffixTables::SuffixTables(const DiscretePrior& prior)
    : horizon_(prior.horizon()),
      mass_(static_cast<std::size_t>(prior.horizon()) + 1, 0.0),
      first_moment_(static_cast<std::size_t>(prior.horizon()) + 1, 0.0) {
  const auto masses = prior.dense_masses();
  for (Day t = horizon_; t >= 1; --t) {
    mass_[t - 1] = mass_[t] + masses[t - 1];
    first_moment_[t - 1] = first_moment_[t] + static_cast<double>(t) * masses[t - 1];
  }
}

double SuffixTables::expected_rent(Day t) const {
  return residual_from_sums(first_moment_[t - 1], mass_[t - 1], t);
}

DiscretePrior posterior_at(const DiscretePrior& prior, Day t) {
  check_day(prior, t);
  if (!(survival(prior, t) > 0.0)) {
    throw Error(ErrorCode::kZeroSurvival, fmt::format("no mass at or after day {}", t));
  }
  std::vector<SupportPoint> tail;
  for (const auto& point : prior.support()) {
    if (point.day >= t) tail.push_back(point);
  }
  DiscretePrior out = DiscretePrior::from_sparse_weights(prior.horizon(), tail);
  return prior.representation() == Representation::kDense ? out.to_dense() : out;
}

double expected_rent(const DiscretePrior& prior, Day t) {
  check_day(prior, t);
  const auto points = prior.support();
  double z = 0.0;
  for (auto it = points.rbegin(); it != points.rend() && it->day >= t; ++it) z += it->mass;
  if (!(z > 0.0)) {
    throw Error(ErrorCode::kZeroSurvival, fmt::format("no mass at or after day {}", t));
  }
  double e = 0.0;
  for (const auto& point : points) {
    if (point.day >= t) e += point.mass / z * static_cast<double>(point.day - t + 1);
  }
  return e;
}

DecisionOutcome purchase_day(const DiscretePrior& prior, BuyCost b, PurchaseOptions options) {
  switch (options.method) {
    case ScanMethod::kDirect: return scan_direct(prior, b.value(), options.record_trace);
    case ScanMethod::kSuffixSum: return scan_suffix(prior, b.value(), options.record_trace);
    case ScanMethod::kSparse: return scan_sparse(prior, b.value(), options.record_trace);
  }
  return scan_suffix(prior, b.value(), options.record_trace);
}

DecisionOutcome purchase_day(std::span<const double> weights, BuyCost b, PurchaseOptions options) {
  bool any = false;
  for (double w : weights) any = any || w != 0.0;
  if (!any) return {static_cast<Day>(weights.size()) + 1, {}};
  return purchase_day(DiscretePrior::from_dense_weights(weights), b, options);
}

PolicyState::PolicyState(std::shared_ptr<const SuffixTables> tables, BuyCost b, Day day)
    : tables_(std::move(tables)),
      buy_cost_(b),
      day_(day),
      remaining_mass_(tables_->remaining_mass(day)),
      remaining_first_moment_(tables_->remaining_first_moment(day)) {}

PolicyState PolicyState::start(const DiscretePrior& prior, BuyCost b) {
  return PolicyState(std::make_shared<const SuffixTables>(prior), b, 1);
}

std::optional<double> PolicyState::expected_rent() const {
  if (day_ > horizon() || !(remaining_mass_ > 0.0)) return std::nullopt;
  return residual_from_sums(remaining_first_moment_, remaining_mass_, day_);
}

std::pair<Action, PolicyState> step(const PolicyState& state) {
  const auto e = state.expected_rent();
  if (!e) return {Action::kSeasonOver, state};
  if (state.buy_cost().value() <= *e) return {Action::kBuy, state};
  // Z_{t+1} = Z_t - pi_t and S1_{t+1} = S1_t - t pi_t, read from the
  // backward-accumulated tables so replay matches purchase_day bit-for-bit.
  return {Action::kRent, PolicyState(state.tables_, state.buy_cost_, state.day_ + 1)};
}

double realized_cost(Day purchase_day, Day season_length, BuyCost b) {
  if (purchase_day < 1) {
    throw Error(ErrorCode::kOutOfRange, fmt::format("purchase day {} < 1", purchase_day));
  }
  if (season_length < 1) {
    throw Error(ErrorCode::kOutOfRange, fmt::format("season length {} < 1", season_length));
  }
  if (purchase_day <= season_length) return static_cast<double>(purchase_day - 1) + b.value();
  return static_cast<double>(season_length);
}

double offline_cost(Day season_length, BuyCost b) {
  return std::min(static_cast<double>(season_length), b.value());
}

}  // namespace skirental
