#pragma once

#include "skirental/bayes_policy.hpp"
#include "skirental/prior.hpp"

namespace skirental {

struct ECRReport {
  double ecr = 1.0;
  double alg_expected_cost = 0.0;
  double opt_expected_cost = 0.0;
  Day purchase_day = 0;
};

/// E_pi[min(T, b)].
double opt_expected_cost(const DiscretePrior& prior, BuyCost b);

/// Expected cost of buying on a fixed day under `prior`:
/// sum_{k<t} pi_k k + sum_{k>=t} pi_k (t-1+b). A purchase day of M+1 leaves
/// the second sum empty.
double expected_policy_cost(const DiscretePrior& prior, Day purchase_day, BuyCost b);

/// expected_policy_cost(t) minus the cost of never buying:
/// sum_{k>=t} pi_k (t-1+b-k). Zero for t past the last support point.
double purchase_excess_cost(const DiscretePrior& prior, Day purchase_day, BuyCost b);

/// Exhaustive argmin of the expected cost over days 1..M+1. Ties resolve to
/// M+1 when never buying is among the minimizers, otherwise to the earliest
/// day.
Day cost_minimizing_purchase_day(const DiscretePrior& prior, BuyCost b);

/// Ratio of expectations for the Bayesian purchase day.
ECRReport ecr(const DiscretePrior& prior, BuyCost b);

/// Three-case closed form for uniform(N). Exact for integer b.
double ecr_uniform_closed_form(Day n, BuyCost b);

/// Mean residual rental under truncated_geometric(p, N) from day k+1:
/// 1/p - (N-k) q^(N-k) / (1 - q^(N-k)), q = 1-p. Requires 0 <= k < N.
double geometric_residual_expectation(double p, Day n, Day k);

/// min(E_1, b) / E[min(T, b)] for truncated_geometric(p, N), N > 2.
double ecr_geometric_closed_form(double p, Day n, BuyCost b);

}  // namespace skirental
