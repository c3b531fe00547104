#include "skirental/analytic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace skirental {
namespace {

void check_geometric(double p, Day n) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidParams, fmt::format("p={} outside (0, 1)", p));
  }
  if (n < 1) throw Error(ErrorCode::kInvalidParams, fmt::format("N={} < 1", n));
}

}  // namespace

double opt_expected_cost(const DiscretePrior& prior, BuyCost b) {
  double total = 0.0;
  for (const auto& point : prior.support()) total += point.mass * offline_cost(point.day, b);
  return total;
}

double expected_policy_cost(const DiscretePrior& prior, Day purchase_day, BuyCost b) {
  if (purchase_day < 1 || purchase_day > prior.horizon() + 1) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("purchase day {} outside [1, {}]", purchase_day, prior.horizon() + 1));
  }
  const double buy_branch = static_cast<double>(purchase_day - 1) + b.value();
  double rented = 0.0;
  double bought = 0.0;
  for (const auto& point : prior.support()) {
    if (point.day < purchase_day) {
      rented += point.mass * static_cast<double>(point.day);
    } else {
      bought += point.mass;
    }
  }
  return rented + bought * buy_branch;
}

double purchase_excess_cost(const DiscretePrior& prior, Day purchase_day, BuyCost b) {
  if (purchase_day < 1 || purchase_day > prior.horizon() + 1) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("purchase day {} outside [1, {}]", purchase_day, prior.horizon() + 1));
  }
  const double buy_branch = static_cast<double>(purchase_day - 1) + b.value();
  double excess = 0.0;
  for (const auto& point : prior.support()) {
    if (point.day >= purchase_day) excess += point.mass * (buy_branch - point.day);
  }
  return excess;
}

Day cost_minimizing_purchase_day(const DiscretePrior& prior, BuyCost b) {
  // Minimizing the excess over never buying avoids cancellation against the
  // day-independent first moment, so tail days no longer tie by round-off.
  const Day never = prior.horizon() + 1;
  Day best = never;
  double best_excess = 0.0;
  for (Day t = 1; t <= prior.last_support_day(); ++t) {
    const double excess = purchase_excess_cost(prior, t, b);
    if (excess < best_excess) {
      best = t;
      best_excess = excess;
    }
  }
  return best;
}

ECRReport ecr(const DiscretePrior& prior, BuyCost b) {
  ECRReport report;
  report.purchase_day = purchase_day(prior, b).purchase_day;
  report.alg_expected_cost = expected_policy_cost(prior, report.purchase_day, b);
  report.opt_expected_cost = opt_expected_cost(prior, b);
  report.ecr = report.alg_expected_cost / report.opt_expected_cost;
  return report;
}

double ecr_uniform_closed_form(Day n, BuyCost b) {
  if (n < 1) throw Error(ErrorCode::kInvalidParams, fmt::format("N={} < 1", n));
  const double nn = n;
  const double bb = b.value();
  if (nn <= bb) return 1.0;
  if (nn < 2.0 * bb - 1.0) return nn * (nn + 1.0) / (bb * (2.0 * nn - bb + 1.0));
  return 2.0 * nn / (2.0 * nn - bb + 1.0);
}

double geometric_residual_expectation(double p, Day n, Day k) {
  check_geometric(p, n);
  if (k < 0 || k >= n) {
    throw Error(ErrorCode::kInvalidParams, fmt::format("k={} outside [0, {})", k, n));
  }
  const double remaining = static_cast<double>(n - k);
  const double log_q_remaining = remaining * std::log1p(-p);
  // q^(N-k) / (1 - q^(N-k)), with expm1 keeping the denominator accurate
  // when p (N-k) is small.
  const double tail_odds = std::exp(log_q_remaining) / -std::expm1(log_q_remaining);
  return 1.0 / p - remaining * tail_odds;
}

double ecr_geometric_closed_form(double p, Day n, BuyCost b) {
  check_geometric(p, n);
  if (n <= 2) throw Error(ErrorCode::kInvalidParams, fmt::format("N={} must exceed 2", n));
  const DiscretePrior prior = build_prior({GeometricFamily{p, n}, n});
  double first_moment = 0.0;
  for (const auto& point : prior.support()) first_moment += point.day * point.mass;
  return std::min(first_moment, b.value()) / opt_expected_cost(prior, b);
}

}  // namespace skirental
