#include "skirental/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "skirental/analytic.hpp"
#include "skirental/bayes_policy.hpp"
#include "skirental/prior_io.hpp"

namespace skirental {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("write to {} failed", path.string()));
}

void make_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

std::string num(double x) { return std::isfinite(x) ? fmt::format("{:.12g}", x) : std::string(); }

struct NamedPerturbation {
  std::string error_type;
  std::string label;
  Perturbation kind;
};

std::vector<NamedPerturbation> q1_perturbations() {
  std::vector<NamedPerturbation> out;
  for (double delta : {-40.0, -20.0, -10.0, 10.0, 20.0, 40.0}) {
    out.push_back({"mean", fmt::format("mean_shift({:+g})", delta), MeanShift{delta}});
  }
  for (double c : {0.5, 0.75, 1.5, 2.0}) {
    out.push_back({"variance", fmt::format("variance_scale({:g})", c), VarianceScale{c}});
  }
  out.push_back({"shape", "shape_swap(uniform)", ShapeSwap{ShapeFamily::kUniform}});
  out.push_back({"shape", "shape_swap(geometric)", ShapeSwap{ShapeFamily::kGeometric}});
  return out;
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  return {{"buy_cost", buy_cost},
          {"horizon", horizon},
          {"n_trials", n_trials},
          {"base_seed", base_seed},
          {"success_threshold", success_threshold},
          {"lambda", lambda},
          {"prediction_noise", prediction_noise}};
}

Q1Report experiment_q1(const ExperimentConfig& config) {
  const BuyCost b(config.buy_cost);
  const double mu = 100.0;
  Q1Report report;
  double increase_sum = 0.0;
  int perturbed = 0;
  for (double cv : {0.42, 0.33, 0.31}) {
    const PriorFamilySpec truth{GaussianFamily{mu, cv * mu, config.horizon}, config.horizon};
    const DiscretePrior truth_prior = build_prior(truth);
    const double opt = opt_expected_cost(truth_prior, b);
    const double baseline_cost =
        expected_policy_cost(truth_prior, purchase_day(truth_prior, b).purchase_day, b);

    std::vector<NamedPerturbation> cells = {{"none", "none", MeanShift{0.0}}};
    for (auto& p : q1_perturbations()) cells.push_back(std::move(p));
    for (const auto& cell : cells) {
      const DiscretePrior assumed = perturb(truth_prior, cell.kind);
      MisspecificationCell row;
      row.regime = fmt::format("cv={:g}", cv);
      row.cv = cv;
      row.mu = mu;
      row.sigma = cv * mu;
      row.error_type = cell.error_type;
      row.perturbation = cell.label;
      row.tv = tv_distance(assumed, truth_prior);
      row.purchase_day = purchase_day(assumed, b).purchase_day;
      const double cost = expected_policy_cost(truth_prior, row.purchase_day, b);
      row.ecr_exact = cost / opt;
      row.cost_increase = cost / baseline_cost - 1.0;

      const TrialBatch batch =
          run_trials(truth, BayesianPolicy{assumed}, b, config.n_trials, config.base_seed);
      const MetricsSummary summary = summarize(batch, config.success_threshold);
      row.mean_cr = summary.mean_cr;
      row.ecr_empirical = summary.ecr_empirical;
      for (const auto& t : batch.trials) row.ratios.push_back(t.ratio);

      if (cell.error_type != "none") {
        increase_sum += row.cost_increase;
        ++perturbed;
        report.worst_cost_increase = std::max(report.worst_cost_increase, row.cost_increase);
      }
      report.cells.push_back(std::move(row));
    }
  }
  report.mean_cost_increase = perturbed ? increase_sum / perturbed : 0.0;
  return report;
}

GeometricFamily discrete_exponential(double rate, Day horizon) {
  return {-std::expm1(-rate), horizon};
}

Q2Report experiment_q2(const ExperimentConfig& config) {
  const BuyCost b(config.buy_cost);
  const Day m = config.horizon;
  const std::vector<std::pair<std::string, PriorFamilySpec>> truths = {
      {"uniform", {UniformFamily{m}, m}},
      {"gaussian", {GaussianFamily{100.0, 30.0, m}, m}},
      {"exponential", {discrete_exponential(0.01, m), m}},
  };
  const PredictionNoise noise{1.0, config.prediction_noise};
  Q2Report report;
  for (const auto& [name, truth] : truths) {
    FamilyResult result{name, format_family(truth.family), {}};
    const std::vector<PolicySpec> policies = {
        BayesianPolicy{build_prior(truth)}, PointPredictionPolicy{noise}, RandomizedPolicy{},
        DeterministicPolicy{}, AugmentedPolicy{config.lambda, noise}};
    for (const auto& policy : policies) {
      result.summaries.push_back(summarize(
          run_trials(truth, policy, b, config.n_trials, config.base_seed), config.success_threshold));
    }
    report.families.push_back(std::move(result));
  }
  return report;
}

Q3Report experiment_q3(const ExperimentConfig& config) {
  const BuyCost b(config.buy_cost);
  Q3Report report;
  const PriorFamilySpec truth{PointMassFamily{report.season_length}, config.horizon};
  for (double alpha : kQ3Biases) {
    const PredictionNoise noise{alpha, config.prediction_noise};
    BiasRow row;
    row.alpha = alpha;
    row.bayesian = summarize(run_trials(truth, PredictiveBayesianPolicy{noise}, b,
                                        config.n_trials, config.base_seed),
                             config.success_threshold);
    row.point = summarize(
        run_trials(truth, PointPredictionPolicy{noise}, b, config.n_trials, config.base_seed),
        config.success_threshold);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<std::pair<std::string, PriorFamilySpec>> multimodal_priors(Day horizon) {
  const Day m = horizon;
  return {
      {"bimodal",
       {MixtureFamily{{{0.7, GaussianFamily{10.0, 3.0, m}}, {0.3, GaussianFamily{25.0, 5.0, m}}}},
        m}},
      {"trimodal", {ExplicitFamily{{{8, 1.0 / 3.0}, {20, 1.0 / 3.0}, {40, 1.0 / 3.0}}}, m}},
      {"seasonal",
       {MixtureFamily{{{0.3, GaussianFamily{5.0, 3.0, m}}, {0.7, GaussianFamily{30.0, 10.0, m}}}},
        m}},
  };
}

Q4Report experiment_q4(const ExperimentConfig& config) {
  const BuyCost b(config.buy_cost);
  Q4Report report;
  for (const auto& [name, spec] : multimodal_priors(config.horizon)) {
    const DiscretePrior prior = build_prior(spec);
    MultimodalCase c;
    c.name = name;
    c.spec = format_family(spec.family);
    c.log_concave = is_log_concave(prior);
    c.myopic_day = purchase_day(prior, b).purchase_day;
    c.oracle_day = cost_minimizing_purchase_day(prior, b);
    c.myopic_cost = expected_policy_cost(prior, c.myopic_day, b);
    c.oracle_cost = expected_policy_cost(prior, c.oracle_day, b);
    c.ecr = c.myopic_cost / opt_expected_cost(prior, b);
    c.pmf = prior.dense_masses();
    const SuffixTables tables(prior);
    for (Day t = 1; t <= prior.horizon(); ++t) {
      c.survival.push_back(tables.remaining_mass(t));
      c.expected_rent.push_back(tables.remaining_mass(t) > 0.0
                                    ? tables.expected_rent(t)
                                    : std::numeric_limits<double>::quiet_NaN());
    }
    report.cases.push_back(std::move(c));
  }
  return report;
}

std::vector<std::filesystem::path> write_q1(const std::filesystem::path& dir, const Q1Report& r) {
  make_dir(dir);
  const auto cells_path = dir / "q1_misspecification.csv";
  auto out = open_output(cells_path);
  out << "regime,cv,mu,sigma,error_type,perturbation,tv,t_star,mean_cr,ecr_empirical,ecr_exact,"
         "cost_increase\n";
  for (const auto& c : r.cells) {
    out << fmt::format("{},{:g},{:g},{:g},{},{},{},{},{},{},{},{}\n", c.regime, c.cv, c.mu,
                       c.sigma, c.error_type, c.perturbation, num(c.tv), c.purchase_day,
                       num(c.mean_cr), num(c.ecr_empirical), num(c.ecr_exact),
                       num(c.cost_increase));
  }
  finish(out, cells_path);

  // Per-trial ratio distribution pooled by TV bins of width 0.1.
  const auto bins_path = dir / "q1_cr_by_tv.csv";
  auto bins = open_output(bins_path);
  bins << "tv_lo,tv_hi,cells,trials,mean,p05,p25,p50,p75,p95\n";
  for (int bin = 0; bin < 10; ++bin) {
    const double lo = bin / 10.0;
    const double hi = (bin + 1) / 10.0;
    std::vector<double> pooled;
    int cells = 0;
    for (const auto& c : r.cells) {
      const bool inside = c.tv >= lo && (c.tv < hi || (bin == 9 && c.tv <= hi));
      if (!inside) continue;
      ++cells;
      pooled.insert(pooled.end(), c.ratios.begin(), c.ratios.end());
    }
    if (pooled.empty()) continue;
    double total = 0.0;
    for (double x : pooled) total += x;
    bins << fmt::format("{:g},{:g},{},{},{},{},{},{},{},{}\n", lo, hi, cells, pooled.size(),
                        num(total / static_cast<double>(pooled.size())),
                        num(nearest_rank_percentile(pooled, 0.05)),
                        num(nearest_rank_percentile(pooled, 0.25)),
                        num(nearest_rank_percentile(pooled, 0.50)),
                        num(nearest_rank_percentile(pooled, 0.75)),
                        num(nearest_rank_percentile(pooled, 0.95)));
  }
  finish(bins, bins_path);
  return {cells_path, bins_path};
}

std::vector<std::filesystem::path> write_q2(const std::filesystem::path& dir, const Q2Report& r) {
  make_dir(dir);
  const auto path = dir / "q2_perfect_prior.csv";
  auto out = open_output(path);
  out << "family,policy,mean_cr,ci_lo,ci_hi,p95,success_rate,ecr_empirical\n";
  for (const auto& f : r.families) {
    for (const auto& s : f.summaries) {
      out << fmt::format("{},{},{},{},{},{},{},{}\n", f.family, s.policy, num(s.mean_cr),
                         num(s.ci_lo), num(s.ci_hi), num(s.p95), num(s.success_rate),
                         num(s.ecr_empirical));
    }
  }
  finish(out, path);
  return {path};
}

std::vector<std::filesystem::path> write_q3(const std::filesystem::path& dir, const Q3Report& r) {
  make_dir(dir);
  const auto path = dir / "q3_noisy_prediction.csv";
  auto out = open_output(path);
  out << "alpha,abs_bias,bayesian_cr,bayesian_ci_lo,bayesian_ci_hi,point_cr,point_ci_lo,"
         "point_ci_hi\n";
  for (const auto& row : r.rows) {
    out << fmt::format("{:g},{:g},{},{},{},{},{},{}\n", row.alpha, std::abs(row.alpha - 1.0),
                       num(row.bayesian.mean_cr), num(row.bayesian.ci_lo),
                       num(row.bayesian.ci_hi), num(row.point.mean_cr), num(row.point.ci_lo),
                       num(row.point.ci_hi));
  }
  finish(out, path);
  return {path};
}

std::vector<std::filesystem::path> write_q4(const std::filesystem::path& dir, const Q4Report& r) {
  make_dir(dir);
  const auto summary_path = dir / "q4_summary.csv";
  auto summary = open_output(summary_path);
  summary << "case,spec,log_concave,myopic_t_star,oracle_t_star,myopic_cost,oracle_cost,ecr\n";
  for (const auto& c : r.cases) {
    summary << fmt::format("{},\"{}\",{},{},{},{},{},{}\n", c.name, c.spec, c.log_concave ? 1 : 0,
                           c.myopic_day, c.oracle_day, num(c.myopic_cost), num(c.oracle_cost),
                           num(c.ecr));
  }
  finish(summary, summary_path);

  const auto curves_path = dir / "q4_curves.csv";
  auto curves = open_output(curves_path);
  curves << "case,t,pmf,survival,expected_rent\n";
  for (const auto& c : r.cases) {
    for (std::size_t i = 0; i < c.pmf.size(); ++i) {
      curves << fmt::format("{},{},{},{},{}\n", c.name, i + 1, num(c.pmf[i]), num(c.survival[i]),
                            num(c.expected_rent[i]));
    }
  }
  finish(curves, curves_path);
  return {summary_path, curves_path};
}

}  // namespace skirental
