// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "skirental/adaptive.hpp"
#include "skirental/analytic.hpp"
#include "skirental/baselines.hpp"
#include "skirental/bayes_policy.hpp"
#include "skirental/cli.hpp"
#include "skirental/experiments.hpp"
#include "skirental/fusion.hpp"
#include "skirental/harness.hpp"
#include "skirental/prior_io.hpp"

using namespace skirental;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;
};

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// --- 1 ---------------------------------------------------------------------

Verdict uniform_closed_form() {
  Verdict v;
  double worst = 0.0;
  int cases = 0;
  for (double b : {2.0, 5.0, 10.0, 50.0, 100.0, 200.0}) {
    for (Day n = 1; n <= 500; ++n) {
      const double exact = ecr(build_prior({UniformFamily{n}, n}), BuyCost(b)).ecr;
      const double closed = ecr_uniform_closed_form(n, BuyCost(b));
      const double e = rel_err(closed, exact);
      worst = std::max(worst, e);
      ++cases;
      if (e > 1e-9) {
        v.pass = false;
        v.notes.push_back(fmt::format("N={} b={}: closed {} exact {}", n, b, closed, exact));
      }
    }
  }
  v.detail = fmt::format("{} cases, max rel err {:.2e} (tol 1e-9)", cases, worst);
  return v;
}

// --- 2 ---------------------------------------------------------------------

// Conditional residual length computed from weights rescaled to the first
// remaining day, q^i for i = 0..N-k-1. Nothing here can underflow to a
// meaningful degree, so it covers tails a built prior cannot represent.
double rescaled_residual(double p, Day n, Day k) {
  long double num = 0.0L;
  long double den = 0.0L;
  long double w = 1.0L;
  for (Day i = 0; i < n - k; ++i) {
    num += w * (i + 1);
    den += w;
    w *= 1.0L - p;
  }
  return static_cast<double>(num / den);
}

Verdict geometric_residual() {
  Verdict v;
  double worst_library = 0.0;
  double worst_rescaled = 0.0;
  int library_cases = 0;
  int rescaled_cases = 0;
  std::vector<std::string> truncated;
  for (double p : {0.01, 0.05, 0.1, 0.3, 0.5, 0.9}) {
    for (Day n : {10, 50, 100, 500}) {
      const auto prior = build_prior({GeometricFamily{p, n}, n});
      // a tail below the smallest normal double is flushed, leaving a prior
      // that stops short of N; the library sum then describes that prior
      const bool represented = prior.last_support_day() == n;
      if (!represented) {
        truncated.push_back(fmt::format("geometric({},{}) ends at day {}", p, n, prior.last_support_day()));
      }
      for (Day k = 0; k < n; ++k) {
        const double closed = geometric_residual_expectation(p, n, k);
        const double reference = rescaled_residual(p, n, k);
        const double e = rel_err(closed, reference);
        worst_rescaled = std::max(worst_rescaled, e);
        ++rescaled_cases;
        if (e > 1e-9) {
          v.pass = false;
          v.notes.push_back(fmt::format("p={} N={} k={}: closed {} rescaled sum {}", p, n, k, closed, reference));
        }
        if (!represented) continue;
        const double direct = expected_rent(prior, k + 1);
        const double d = rel_err(closed, direct);
        worst_library = std::max(worst_library, d);
        ++library_cases;
        if (d > 1e-9) {
          v.pass = false;
          v.notes.push_back(fmt::format("p={} N={} k={}: closed {} expected_rent {}", p, n, k, closed, direct));
        }
      }
    }
  }
  v.detail = fmt::format("all {} (p,N,k) cases vs rescaled direct sum, max rel err {:.2e}; {} cases "
                         "vs expected_rent on the built prior, max rel err {:.2e} (tol 1e-9)",
                         rescaled_cases, worst_rescaled, library_cases, worst_library);
  for (const auto& t : truncated) v.notes.push_back(t + "; compared against the rescaled sum only");
  return v;
}

// --- 3 ---------------------------------------------------------------------

std::vector<PriorFamilySpec> log_concave_grid() {
  std::vector<PriorFamilySpec> out;
  for (Day n : {1, 2, 5, 10, 50, 100, 150, 199, 200, 250, 500}) out.push_back({UniformFamily{n}, 500});
  for (double p : {0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.3, 0.5, 0.9}) {
    for (Day n : {10, 50, 100, 300, 500}) out.push_back({GeometricFamily{p, n}, 500});
  }
  for (double mu : {1.0, 10.0, 50.0, 100.0, 150.0, 300.0, 499.0}) {
    for (double sigma : {0.5, 3.0, 10.0, 30.0, 42.0, 100.0, 400.0}) {
      out.push_back({GaussianFamily{mu, sigma, 500}, 500});
    }
  }
  return out;
}

Verdict monotonicity() {
  Verdict v;
  int priors = 0;
  long checks = 0;
  for (const auto& spec : log_concave_grid()) {
    const auto prior = build_prior(spec);
    if (!is_log_concave(prior)) {
      v.pass = false;
      v.notes.push_back(format_family(spec.family) + " fails the log-concavity predicate");
      continue;
    }
    ++priors;
    const SuffixTables tables(prior);
    for (Day t = 1; t < prior.horizon(); ++t) {
      if (!(tables.remaining_mass(t + 1) > 0.0)) break;
      ++checks;
      const double now = tables.expected_rent(t);
      const double next = tables.expected_rent(t + 1);
      if (next > now + 1e-9) {
        v.pass = false;
        v.notes.push_back(fmt::format("{} t={}: {} -> {}", format_family(spec.family), t, now, next));
      }
    }
  }
  v.detail = fmt::format("{} log-concave builder outputs, {} day pairs checked", priors, checks);
  return v;
}

// --- 4 ---------------------------------------------------------------------

// Exhaustive search written independently of the library: expected cost of
// buying on day t, less the (t-independent) cost of never buying, is
// sum_{k>=t} pi_k (t - 1 + b - k). Never buying is the zero baseline and is
// preferred on exact ties; otherwise the earliest minimizer wins.
Day brute_force_day(const std::vector<double>& pi, double b) {
  const Day m = static_cast<Day>(pi.size());
  Day best = m + 1;
  long double best_excess = 0.0L;
  for (Day t = 1; t <= m; ++t) {
    long double excess = 0.0L;
    for (Day k = t; k <= m; ++k) {
      excess += static_cast<long double>(pi[k - 1]) * (static_cast<long double>(t - 1) + b - k);
    }
    if (excess < best_excess) {
      best_excess = excess;
      best = t;
    }
  }
  return best;
}

// Literal expected cost, used to report how far apart two days are.
long double literal_cost(const std::vector<double>& pi, Day t, double b) {
  long double c = 0.0L;
  for (std::size_t k = 1; k <= pi.size(); ++k) {
    c += pi[k - 1] * (static_cast<Day>(k) < t ? static_cast<long double>(k) : t - 1 + b);
  }
  return c;
}

DiscretePrior random_log_concave(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> horizon(2, 200);
  const Day m = horizon(rng);
  switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
    case 0: {
      const Day n = std::uniform_int_distribution<Day>(1, m)(rng);
      return build_prior({UniformFamily{n}, m});
    }
    case 1: {
      const double p = std::exp(std::log(0.002) + u(rng) * (std::log(0.9) - std::log(0.002)));
      const Day n = std::uniform_int_distribution<Day>(1, m)(rng);
      return build_prior({GeometricFamily{p, n}, m});
    }
    case 2:
      return build_prior({GaussianFamily{u(rng) * m * 1.2, 0.5 + u(rng) * m * 0.5, m}, m});
    default: {
      // concave log-weights on a random contiguous window
      const Day lo = std::uniform_int_distribution<Day>(1, m)(rng);
      const Day hi = std::uniform_int_distribution<Day>(lo, m)(rng);
      std::vector<double> w(static_cast<std::size_t>(m), 0.0);
      double log_w = 0.0;
      double slope = (u(rng) - 0.3) * 0.5;
      const double curvature = u(rng) * 0.02;
      std::vector<double> logs;
      for (Day k = lo; k <= hi; ++k) {
        logs.push_back(log_w);
        log_w += slope;
        slope -= curvature * u(rng);
      }
      const double peak = *std::max_element(logs.begin(), logs.end());
      for (Day k = lo; k <= hi; ++k) w[k - 1] = std::exp(logs[k - lo] - peak);
      return DiscretePrior::from_dense_weights(w);
    }
  }
}

Verdict bayes_oracle() {
  Verdict v;
  std::mt19937_64 rng(20240601);
  int agree = 0;
  int never = 0;
  int first_day = 0;
  int total = 0;
  int rejected = 0;
  while (total < 500) {
    const auto prior = random_log_concave(rng);
    if (!is_log_concave(prior)) {
      ++rejected;
      continue;
    }
    ++total;
    // b spread around the prior mean so both buy and rent outcomes occur
    const double b = 1.01 + std::uniform_real_distribution<double>(0.0, 2.0 * prior.mean() + 5.0)(rng);
    const auto pi = prior.dense_masses();
    const Day rule = purchase_day(prior, BuyCost(b)).purchase_day;
    const Day oracle = brute_force_day(pi, b);
    if (rule == oracle) {
      ++agree;
      never += rule == prior.horizon() + 1;
      first_day += rule == 1;
    } else {
      v.pass = false;
      v.notes.push_back(fmt::format("M={} b={:.6g}: rule {} (cost {:.15Lg}) oracle {} (cost {:.15Lg})",
                                    prior.horizon(), b, rule, literal_cost(pi, rule, b), oracle,
                                    literal_cost(pi, oracle, b)));
    }
  }
  v.detail = fmt::format("{}/{} random log-concave priors agree exactly ({} buy day 1, {} never "
                         "buy; {} non-log-concave draws discarded)",
                         agree, total, first_day, never, rejected);
  return v;
}

// --- 5 ---------------------------------------------------------------------

Verdict scan_agreement() {
  Verdict v;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0;
  int sparse_cases = 0;
  int later = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    DiscretePrior prior = [&] {
      if (rep % 2 == 0) {
        const Day m = 500;
        const int n = std::uniform_int_distribution<int>(1, 20)(rng);
        std::map<Day, double> pts;
        while (static_cast<int>(pts.size()) < n) {
          pts[std::uniform_int_distribution<Day>(1, m)(rng)] = 0.01 + u(rng);
        }
        std::vector<SupportPoint> points;
        for (auto [d, w] : pts) points.push_back({d, w});
        ++sparse_cases;
        return DiscretePrior::from_sparse_weights(m, points);
      }
      const Day m = std::uniform_int_distribution<Day>(1, 500)(rng);
      std::vector<double> w(static_cast<std::size_t>(m));
      const double density = u(rng);
      for (auto& x : w) x = u(rng) < density ? u(rng) : 0.0;
      w[std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng)] += 1.0;
      return DiscretePrior::from_dense_weights(w);
    }();
    const double b = 1.01 + u(rng) * (1.5 * prior.mean() + 5.0);
    const BuyCost cost(b);
    const Day direct = purchase_day(prior.to_dense(), cost, {ScanMethod::kDirect}).purchase_day;
    const Day suffix = purchase_day(prior.to_dense(), cost, {ScanMethod::kSuffixSum}).purchase_day;
    const Day sparse = purchase_day(prior.to_sparse(), cost, {ScanMethod::kSparse}).purchase_day;
    if (direct == suffix && suffix == sparse) {
      ++agree;
      later += suffix > 1 && suffix <= prior.horizon();
    } else {
      v.pass = false;
      v.notes.push_back(fmt::format("rep {}: direct {} suffix {} sparse {}", rep, direct, suffix, sparse));
    }
  }
  v.detail = fmt::format("{}/1000 priors agree ({} sparse with <= 20 points in M=500; {} buy "
                         "after day 1)",
                         agree, sparse_cases, later);
  return v;
}

// --- 6 ---------------------------------------------------------------------

Verdict classical_constants() {
  Verdict v;
  const BuyCost b(100);
  const Day threshold = deterministic_threshold(b).purchase_day;
  double det_worst = 0.0;
  for (Day t = 1; t <= 10000; ++t) {
    det_worst = std::max(det_worst, realized_cost(threshold, t, b) / offline_cost(t, b));
  }
  const RandomizedStrategy randomized(b, 42);
  double rand_worst = 0.0;
  Day rand_arg = 0;
  for (Day t = 1; t <= 500; ++t) {
    const double r = randomized.expected_ratio(t);
    if (r > rand_worst) {
      rand_worst = r;
      rand_arg = t;
    }
  }
  v.pass = std::abs(det_worst - 1.99) <= 1e-12 && rand_worst <= 1.60 && rand_worst >= 1.57;
  v.detail = fmt::format("deterministic worst ratio {:.15g} (want 1.99); randomized worst "
                         "expected ratio {:.6f} at T={} (want in [1.57, 1.60])",
                         det_worst, rand_worst, rand_arg);
  return v;
}

// --- 7 ---------------------------------------------------------------------

Verdict monte_carlo() {
  Verdict v;
  const BuyCost b(100);
  std::vector<std::string> parts;
  auto check = [&](const PriorFamilySpec& truth, double target, const std::string& label) {
    const auto prior = build_prior(truth);
    const auto s = summarize(run_trials(truth, BayesianPolicy{prior}, b, 10000, 42));
    const double z = std::abs(s.ecr_empirical - target) / s.ecr_se;
    const bool ok = z <= 3.0;
    v.pass = v.pass && ok;
    parts.push_back(fmt::format("{}: {:.5f} vs {:.5f} ({:.2f} SE)", label, s.ecr_empirical, target, z));
  };
  check({UniformFamily{500}, 500}, 1000.0 / 901.0, "uniform(500)");
  for (auto [p, n] : {std::pair{0.01, 500}, {0.005, 500}, {0.02, 300}}) {
    const double closed = ecr_geometric_closed_form(p, n, b);
    // the closed form is the exact ECR of the rule on these priors
    const double exact = ecr(build_prior({GeometricFamily{p, n}, n}), b).ecr;
    if (rel_err(closed, exact) > 1e-12) {
      v.pass = false;
      v.notes.push_back(fmt::format("geometric({}, {}): closed {} exact {}", p, n, closed, exact));
    }
    check({GeometricFamily{p, n}, n}, closed, fmt::format("geometric({},{})", p, n));
  }
  std::string joined;
  for (const auto& s : parts) joined += (joined.empty() ? "" : "; ") + s;
  v.detail = "n=10000 seed 42, tol 3 SE; " + joined;
  return v;
}

// --- 8 ---------------------------------------------------------------------

Verdict perfect_prior_ordering() {
  Verdict v;
  ExperimentConfig config;
  const auto report = experiment_q2(config);
  std::vector<std::string> parts;
  for (const auto& family : report.families) {
    std::map<std::string, double> cr;
    for (const auto& s : family.summaries) cr[s.policy] = s.mean_cr;
    const double bayes = cr.at("bayesian");
    const double pred = cr.at("point_prediction");
    const double rand = cr.at("randomized");
    const double det = cr.at("deterministic");
    const bool ordered = bayes < pred && pred < rand && rand < det;
    const bool band = bayes <= 1.15;
    v.pass = v.pass && ordered && band;
    parts.push_back(fmt::format("{}: bayes {:.3f} pred {:.3f} rand {:.3f} det {:.3f} [{}{}]",
                                family.family, bayes, pred, rand, det,
                                ordered ? "ordered" : "order violated",
                                band ? "" : ", bayes > 1.15"));
  }
  for (const auto& p : parts) v.notes.push_back(p);
  v.detail = "mean CR ordering bayesian < prediction < randomized < deterministic and bayesian <= 1.15";
  return v;
}

// --- 9 ---------------------------------------------------------------------

Verdict noisy_prediction() {
  Verdict v;
  ExperimentConfig config;
  const auto report = experiment_q3(config);
  const std::map<double, double> reference{{0.5, 1.05}, {0.8, 1.08}, {1.0, 1.12},
                                           {1.2, 1.21}, {1.5, 1.31}, {2.0, 1.43}};
  for (const auto& row : report.rows) {
    const double target = reference.at(row.alpha);
    const bool dominates = row.bayesian.mean_cr < row.point.mean_cr;
    const bool band = std::abs(row.bayesian.mean_cr - target) <= 0.25;
    v.pass = v.pass && dominates && band;
    v.notes.push_back(fmt::format("alpha={}: bayes {:.4f} point {:.4f} reference {:.2f} [{}{}]",
                                  row.alpha, row.bayesian.mean_cr, row.point.mean_cr, target,
                                  dominates ? "dominates" : "no strict dominance",
                                  band ? "" : ", outside +-0.25"));
  }
  v.detail = "bayesian < point prediction at every bias, bayesian within 0.25 of the reference column";
  return v;
}

// --- 10 --------------------------------------------------------------------

double mean_of(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) s += xs[i];
  return s / static_cast<double>(hi - lo);
}

Verdict adaptive_regret() {
  Verdict v;
  const int seeds = 20;
  const std::int64_t rounds = 2000;
  const PriorFamilySpec truth{GaussianFamily{100, 30, 500}, 500};
  const BuyCost b(100);
  const double log_m = std::log(500.0);
  const auto truth_prior = build_prior(truth);
  const Day bayes_day = purchase_day(truth_prior, b).purchase_day;

  std::vector<double> normalized(rounds, 0.0);
  std::vector<double> regret(rounds, 0.0);
  std::vector<double> pseudo(rounds, 0.0);
  double fitted = 0.0;
  for (int s = 0; s < seeds; ++s) {
    const auto seed = static_cast<std::uint64_t>(1000 + s);
    const auto traj = run_adaptive(rounds, truth, b, seed);
    fitted = std::max(fitted, traj.fitted_constant);
    // same draws as run_adaptive, to price the true-prior Bayes policy
    Rng rng(seed);
    double cum_pseudo = 0.0;
    for (std::int64_t r = 0; r < rounds; ++r) {
      const auto& round = traj.rounds[static_cast<std::size_t>(r)];
      const Day t = sample_day(truth_prior, rng);
      cum_pseudo += round.cost - realized_cost(bayes_day, t, b);
      normalized[r] += round.cumulative_regret / std::sqrt((r + 1) * log_m) / seeds;
      regret[r] += round.regret / seeds;
      pseudo[r] += cum_pseudo / std::sqrt((r + 1) * log_m) / seeds;
    }
  }
  const std::size_t decile = rounds / 10;
  const std::size_t quartile = rounds / 4;
  const double first_decile = mean_of(normalized, 0, decile);
  const double last_decile = mean_of(normalized, rounds - decile, rounds);
  const double first_quartile = mean_of(regret, 0, quartile);
  const double last_quartile = mean_of(regret, rounds - quartile, rounds);
  const bool bounded = last_decile <= 2.0 * first_decile;
  const bool decreasing = last_quartile < first_quartile;
  v.pass = bounded && decreasing;
  v.detail = fmt::format("20 seeds, R=2000: normalized regret first decile {:.3f}, last decile "
                         "{:.3f} (need <= 2x) [{}]; per-round regret first quartile {:.3f}, last "
                         "quartile {:.3f} [{}]; max fitted C {:.2f}",
                         first_decile, last_decile, bounded ? "ok" : "exploding", first_quartile,
                         last_quartile, decreasing ? "ok" : "not decreasing", fitted);
  v.notes.push_back(fmt::format(
      "diagnostic: against the true-prior Bayes policy (t*={}) the normalized regret is {:.3f} in "
      "the first decile and {:.3f} in the last",
      bayes_day, mean_of(pseudo, 0, decile), mean_of(pseudo, rounds - decile, rounds)));
  return v;
}

// --- 11 --------------------------------------------------------------------

Verdict fusion_properties() {
  Verdict v;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_order = 0.0;
  double worst_joint = 0.0;
  double worst_mean = 0.0;
  const auto flat = build_prior({UniformFamily{500}, 500});
  for (int rep = 0; rep < 200; ++rep) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<Prediction> preds(static_cast<std::size_t>(n));
    for (auto& p : preds) p = {150.0 + 200.0 * u(rng), 5.0 + 35.0 * u(rng)};
    const auto initial = rep % 2 == 0 ? flat : build_prior({GaussianFamily{100 + 300 * u(rng), 40 + 100 * u(rng), 500}, 500});

    const auto forward = fuse(initial, preds);
    auto shuffled = preds;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto permuted = fuse(initial, shuffled);
    const auto joint = fuse_joint(initial, preds);
    for (Day k = 1; k <= 500; ++k) {
      worst_order = std::max(worst_order, std::abs(forward.mass(k) - permuted.mass(k)));
      worst_joint = std::max(worst_joint, std::abs(forward.mass(k) - joint.mass(k)));
    }
    if (rep % 2 == 0) {
      double num = 0.0;
      double den = 0.0;
      for (const auto& p : preds) {
        num += p.value / (p.sigma * p.sigma);
        den += 1.0 / (p.sigma * p.sigma);
      }
      worst_mean = std::max(worst_mean, std::abs(forward.mean() - num / den));
    }
  }
  v.pass = worst_order <= 1e-10 && worst_joint <= 1e-10 && worst_mean <= 0.5;
  v.detail = fmt::format("200 prediction sets: max |order diff| {:.2e}, max |joint - sequential| "
                         "{:.2e} (tol 1e-10); max |posterior mean - precision-weighted mean| "
                         "{:.3f} days on a flat prior (tol 0.5)",
                         worst_order, worst_joint, worst_mean);
  return v;
}

// --- 12 --------------------------------------------------------------------

Verdict multimodal() {
  Verdict v;
  ExperimentConfig config;
  const auto report = experiment_q4(config);
  for (const auto& c : report.cases) {
    const bool consistent = !c.log_concave || c.myopic_day == c.oracle_day;
    const bool not_worse = c.oracle_cost <= c.myopic_cost * (1.0 + 1e-12);
    v.pass = v.pass && consistent && not_worse;
    v.notes.push_back(fmt::format("{}: log-concave {}, myopic t*={} (cost {:.6f}), oracle t*={} "
                                  "(cost {:.6f}), ECR {:.4f}",
                                  c.name, c.log_concave ? "yes" : "no", c.myopic_day,
                                  c.myopic_cost, c.oracle_day, c.oracle_cost, c.ecr));
  }
  v.detail = fmt::format("{} priors reported; myopic = oracle wherever log-concave", report.cases.size());
  return v;
}

// --- 13 --------------------------------------------------------------------

Verdict determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "skirental_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::vector<std::string>> configs{
      {"--truth", "uniform(500)", "-b", "100", "-n", "3000", "--seed", "42"},
      {"--truth", "gaussian(100,30,500)", "-M", "500", "-b", "100", "-n", "3000", "--seed", "7"},
      {"--truth", "mixture(0.7*gaussian(10,3,500),0.3*gaussian(25,5,500))", "-M", "500", "-b",
       "30", "-n", "1000", "--seed", "123", "--prediction-noise", "0.5"},
  };
  int files = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::vector<std::string> outputs;
    for (int run = 0; run < 2; ++run) {
      const auto dir = root / fmt::format("c{}_{}", i, run);
      std::vector<std::string> args{"skirental", "simulate"};
      args.insert(args.end(), configs[i].begin(), configs[i].end());
      args.insert(args.end(), {"--out", dir.string()});
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out;
      std::ostringstream err;
      if (run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != kExitOk) {
        v.pass = false;
        v.notes.push_back(fmt::format("config {} failed: {}", i, err.str()));
      }
      outputs.push_back(dir.string());
    }
    for (const char* name : {"trials.csv", "summary.csv"}) {
      ++files;
      const auto a = read_text_file(fs::path(outputs[0]) / name);
      const auto b = read_text_file(fs::path(outputs[1]) / name);
      if (a != b || a.empty()) {
        v.pass = false;
        v.notes.push_back(fmt::format("config {}: {} differs", i, name));
      }
    }
  }
  fs::remove_all(root);
  v.detail = fmt::format("{} simulate configs run twice, {} CSV pairs compared byte for byte",
                         configs.size(), files);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"uniform closed form equals exact ECR", uniform_closed_form},
      {"geometric residual formula equals direct sum", geometric_residual},
      {"expected rent monotone on log-concave priors", monotonicity},
      {"rule matches brute-force cost argmin", bayes_oracle},
      {"direct, suffix-sum and sparse scans agree", scan_agreement},
      {"classical deterministic and randomized ratios", classical_constants},
      {"Monte Carlo ECR within 3 SE of exact", monte_carlo},
      {"perfect-prior mean CR ordering", perfect_prior_ordering},
      {"noisy single prediction dominance and band", noisy_prediction},
      {"adaptive regret shape", adaptive_regret},
      {"fusion order and batch invariance", fusion_properties},
      {"multimodal myopic vs oracle consistency", multimodal},
      {"simulate output determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    fmt::print("[{}] {:>2}. {} ({:.1f}s): {}\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
               secs, v.detail);
    const std::size_t shown = std::min<std::size_t>(v.notes.size(), 8);
    for (std::size_t j = 0; j < shown; ++j) fmt::print("         {}\n", v.notes[j]);
    if (v.notes.size() > shown) fmt::print("         ... {} more\n", v.notes.size() - shown);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
