#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "skirental/prior.hpp"

namespace skirental {

/// One-time purchase cost in rent-day units. Must be finite and > 1.
class BuyCost {
 public:
  explicit BuyCost(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

enum class Action { kRent, kBuy, kSeasonOver };

struct TraceEntry {
  Day day = 0;
  double expected_rent = 0.0;
  Action action = Action::kRent;
};

struct DecisionOutcome {
  /// First day the policy buys; horizon + 1 when it never does.
  Day purchase_day = 0;
  /// Filled on request. Ends with kBuy, or with kSeasonOver on the first day
  /// no mass remains (M+1 at the latest).
  std::vector<TraceEntry> trace;
};

/// Suffix sums Z_t = sum_{k>=t} pi_k and S1_t = sum_{k>=t} k pi_k for
/// t = 1..M+1, filled in one backward pass.
class SuffixTables {
 public:
  explicit SuffixTables(const DiscretePrior& prior);

  Day horizon() const noexcept { return horizon_; }
  double remaining_mass(Day t) const { return mass_[t - 1]; }
  double remaining_first_moment(Day t) const { return first_moment_[t - 1]; }

  /// (S1_t - (t-1) Z_t) / Z_t; requires Z_t > 0.
  double expected_rent(Day t) const;

 private:
  Day horizon_;
  std::vector<double> mass_;
  std::vector<double> first_moment_;
};

/// Survival-conditioned posterior p_{t,k} = pi_k / Z_t on t..M (zero before
/// t). Throws ZeroSurvival when Z_t = 0.
DiscretePrior posterior_at(const DiscretePrior& prior, Day t);

/// Expected remaining rental cost, summed directly over the posterior.
double expected_rent(const DiscretePrior& prior, Day t);

enum class ScanMethod {
  kDirect,     // recompute Z_t and the posterior sum every day, O(M^2)
  kSuffixSum,  // one backward pass, O(M)
  kSparse,     // walk support points only, O(n)
};

struct PurchaseOptions {
  ScanMethod method = ScanMethod::kSuffixSum;
  bool record_trace = false;
};

/// First day t with b <= E_rent(t), or M+1. Ties buy.
DecisionOutcome purchase_day(const DiscretePrior& prior, BuyCost b,
                             PurchaseOptions options = {});

/// Raw-weight entry point: validates and normalizes like the prior builder but
/// answers M+1 for an all-zero weight vector instead of throwing.
DecisionOutcome purchase_day(std::span<const double> weights, BuyCost b,
                             PurchaseOptions options = {});

/// Streaming form of purchase_day. A PolicyState is a value; `step` returns
/// the action taken on the current day and the state for the next one.
class PolicyState {
 public:
  static PolicyState start(const DiscretePrior& prior, BuyCost b);

  Day day() const noexcept { return day_; }
  double remaining_mass() const noexcept { return remaining_mass_; }
  double remaining_first_moment() const noexcept { return remaining_first_moment_; }
  BuyCost buy_cost() const noexcept { return buy_cost_; }
  Day horizon() const noexcept { return tables_->horizon(); }

  /// E_rent at the current day; nullopt once no mass remains.
  std::optional<double> expected_rent() const;

 private:
  friend std::pair<Action, PolicyState> step(const PolicyState& state);

  PolicyState(std::shared_ptr<const SuffixTables> tables, BuyCost b, Day day);

  std::shared_ptr<const SuffixTables> tables_;
  BuyCost buy_cost_;
  Day day_;
  double remaining_mass_;
  double remaining_first_moment_;
};

/// Decides the current day. Rent advances to the next day; buy and
/// season-over leave the day unchanged.
std::pair<Action, PolicyState> step(const PolicyState& state);

/// Cost of a policy that buys on `purchase_day` when the season lasts
/// `season_length` days: (t*-1)+b if t* <= T, else T.
double realized_cost(Day purchase_day, Day season_length, BuyCost b);

/// Offline optimum min(T, b).
double offline_cost(Day season_length, BuyCost b);

}  // namespace skirental
