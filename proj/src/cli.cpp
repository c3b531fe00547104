#include "skirental/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "skirental/adaptive.hpp"
#include "skirental/bayes_policy.hpp"
#include "skirental/experiments.hpp"
#include "skirental/fusion.hpp"
#include "skirental/harness.hpp"
#include "skirental/prior_io.hpp"

namespace skirental {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr Day kDefaultHorizon = 500;

struct Settings {
  double buy_cost = 100.0;
  Day horizon = kDefaultHorizon;
  std::string prior;
  std::string prior_file;
  std::string truth;
  std::int64_t trials = 10000;
  std::uint64_t seed = 42;
  double success_threshold = kDefaultSuccessThreshold;
  std::string out = "out";
  std::string policy = "all";
  double lambda = 0.5;
  double prediction_noise = 0.3;
  double bias = 1.0;
  std::int64_t rounds = 2000;
  std::string predictions;
  std::string method = "suffix";
  bool trace = false;
  std::string question;

  json to_json() const {
    json j = {{"buy_cost", buy_cost},
              {"horizon", horizon},
              {"trials", trials},
              {"seed", seed},
              {"success_threshold", success_threshold},
              {"out", out},
              {"policy", policy},
              {"lambda", lambda},
              {"prediction_noise", prediction_noise},
              {"bias", bias},
              {"rounds", rounds}};
    if (!prior.empty()) j["prior"] = prior;
    if (!prior_file.empty()) j["prior_file"] = prior_file;
    if (!truth.empty()) j["truth"] = truth;
    if (!predictions.empty()) j["predictions"] = predictions;
    return j;
  }
};

// Largest day a family can put mass on; used when --horizon is not given.
Day natural_extent(const Family& family) {
  return std::visit(
      [](const auto& f) -> Day {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PointMassFamily>) {
          return f.k;
        } else if constexpr (std::is_same_v<T, ExplicitFamily>) {
          Day m = 1;
          for (const auto& p : f.weights) m = std::max(m, p.day);
          return m;
        } else if constexpr (std::is_same_v<T, MixtureFamily>) {
          Day m = 1;
          for (const auto& c : f.components) m = std::max(m, natural_extent(c.family));
          return m;
        } else {
          return f.n;
        }
      },
      family);
}

class Command {
 public:
  Command(Settings settings, bool horizon_given, std::ostream& out)
      : s_(std::move(settings)), horizon_given_(horizon_given), out_(out) {}

  int decide() {
    const DiscretePrior prior = assumed_prior();
    const BuyCost b(s_.buy_cost);
    PurchaseOptions options;
    options.record_trace = s_.trace;
    options.method = scan_method();
    const DecisionOutcome decision = purchase_day(prior, b, options);
    if (decision.purchase_day > prior.horizon()) {
      out_ << fmt::format("never (t*={})\n", decision.purchase_day);
    } else {
      out_ << fmt::format("t*={}\n", decision.purchase_day);
    }
    if (s_.trace) {
      out_ << "t,E_rent,action\n";
      for (const auto& entry : decision.trace) {
        const char* action = entry.action == Action::kBuy    ? "buy"
                             : entry.action == Action::kRent ? "rent"
                                                             : "season_over";
        out_ << fmt::format("{},{:.12g},{}\n", entry.day, entry.expected_rent, action);
      }
    }
    return kExitOk;
  }

  int simulate() {
    const BuyCost b(s_.buy_cost);
    const PriorFamilySpec truth = truth_spec();
    const PredictionNoise noise{s_.bias, s_.prediction_noise};
    std::vector<PolicySpec> policies;
    // short names or the names written to the CSVs
    const auto want = [&](std::string_view name, std::string_view full) {
      return s_.policy == "all" || s_.policy == name || s_.policy == full;
    };
    if (want("bayesian", "bayesian")) {
      policies.push_back(BayesianPolicy{has_prior_source() ? assumed_prior() : build_prior(truth)});
    }
    if (want("point", "point_prediction")) policies.push_back(PointPredictionPolicy{noise});
    if (want("randomized", "randomized")) policies.push_back(RandomizedPolicy{});
    if (want("deterministic", "deterministic")) policies.push_back(DeterministicPolicy{});
    if (want("augmented", "augmented_threshold")) policies.push_back(AugmentedPolicy{s_.lambda, noise});
    if (s_.policy == "bayesian_prediction") policies.push_back(PredictiveBayesianPolicy{noise});
    if (policies.empty()) {
      throw Error(ErrorCode::kInvalidParams, fmt::format("unknown policy '{}'", s_.policy));
    }

    std::vector<TrialBatch> batches;
    std::vector<MetricsSummary> summaries;
    for (const auto& policy : policies) {
      batches.push_back(run_trials(truth, policy, b, s_.trials, s_.seed));
      summaries.push_back(summarize(batches.back(), s_.success_threshold));
    }
    const fs::path dir = output_dir();
    write_trials_csv(dir / "trials.csv", batches);
    write_summary_csv(dir / "summary.csv", summaries);
    json snapshot = s_.to_json();
    snapshot["command"] = "simulate";
    snapshot["truth_resolved"] = format_family(truth.family);
    write_snapshot(dir, snapshot);
    for (const auto& summary : summaries) {
      out_ << fmt::format("{:<20} mean_cr={:.4f} ecr={:.4f} p95={:.4f} success={:.3f}\n",
                          summary.policy, summary.mean_cr, summary.ecr_empirical, summary.p95,
                          summary.success_rate);
    }
    return kExitOk;
  }

  int experiment() {
    ExperimentConfig config;
    config.buy_cost = s_.buy_cost;
    config.horizon = s_.horizon;
    config.n_trials = s_.trials;
    config.base_seed = s_.seed;
    config.success_threshold = s_.success_threshold;
    config.lambda = s_.lambda;
    config.prediction_noise = s_.prediction_noise;

    const fs::path dir = output_dir();
    std::vector<fs::path> written;
    if (s_.question == "q1") {
      const Q1Report report = experiment_q1(config);
      written = write_q1(dir, report);
      out_ << fmt::format("mean cost increase {:.4f}, worst {:.4f}\n", report.mean_cost_increase,
                          report.worst_cost_increase);
    } else if (s_.question == "q2") {
      written = write_q2(dir, experiment_q2(config));
    } else if (s_.question == "q3") {
      written = write_q3(dir, experiment_q3(config));
    } else if (s_.question == "q4") {
      const Q4Report report = experiment_q4(config);
      written = write_q4(dir, report);
      for (const auto& c : report.cases) {
        out_ << fmt::format("{}: myopic t*={} oracle t*={} log_concave={}\n", c.name, c.myopic_day,
                            c.oracle_day, c.log_concave);
      }
    } else {
      throw Error(ErrorCode::kInvalidParams, fmt::format("unknown experiment '{}'", s_.question));
    }
    json snapshot = config.to_json();
    snapshot["command"] = "experiment";
    snapshot["question"] = s_.question;
    write_snapshot(dir, snapshot);
    for (const auto& path : written) out_ << "wrote " << path.string() << "\n";
    return kExitOk;
  }

  int fuse_command() {
    if (s_.predictions.empty()) {
      throw Error(ErrorCode::kInvalidParams, "--predictions is required");
    }
    const DiscretePrior initial =
        has_prior_source() ? assumed_prior() : build_prior({UniformFamily{s_.horizon}, s_.horizon});
    const DiscretePrior fused = fuse(initial, load_predictions_file(s_.predictions));
    const fs::path dir = output_dir();
    save_prior_file(dir / "fused_prior.csv", fused);
    json snapshot = s_.to_json();
    snapshot["command"] = "fuse";
    write_snapshot(dir, snapshot);
    const DecisionOutcome decision = purchase_day(fused, BuyCost(s_.buy_cost));
    out_ << fmt::format("fused mean={:.6g} t*={}\n", fused.mean(), decision.purchase_day);
    return kExitOk;
  }

  int adapt() {
    const PriorFamilySpec truth = truth_spec();
    const RegretTrajectory trajectory =
        run_adaptive(s_.rounds, truth, BuyCost(s_.buy_cost), s_.seed);
    const fs::path dir = output_dir();
    write_regret_csv(dir / "regret.csv", trajectory);
    json snapshot = s_.to_json();
    snapshot["command"] = "adapt";
    snapshot["truth_resolved"] = format_family(truth.family);
    write_snapshot(dir, snapshot);
    out_ << fmt::format("cumulative regret {:.6g} after {} rounds, fitted C={:.6g}\n",
                        trajectory.rounds.back().cumulative_regret, s_.rounds,
                        trajectory.fitted_constant);
    return kExitOk;
  }

 private:
  bool has_prior_source() const { return !s_.prior.empty() || !s_.prior_file.empty(); }

  PriorFamilySpec parse_spec(const std::string& text) const {
    PriorFamilySpec spec = parse_family_spec(text, s_.horizon);
    if (!horizon_given_) {
      spec.horizon = natural_extent(spec.family);
      validate(spec);
    }
    return spec;
  }

  DiscretePrior assumed_prior() const {
    if (!s_.prior.empty() && !s_.prior_file.empty()) {
      throw Error(ErrorCode::kInvalidParams, "--prior and --prior-file are exclusive");
    }
    if (!s_.prior_file.empty()) {
      return load_prior_file(s_.prior_file,
                             horizon_given_ ? std::optional<Day>(s_.horizon) : std::nullopt);
    }
    if (s_.prior.empty()) throw Error(ErrorCode::kInvalidParams, "no prior given");
    return build_prior(parse_spec(s_.prior));
  }

  PriorFamilySpec truth_spec() const {
    if (!s_.truth.empty()) return parse_spec(s_.truth);
    if (!s_.prior.empty()) return parse_spec(s_.prior);
    throw Error(ErrorCode::kInvalidParams, "--truth (or --prior) is required");
  }

  ScanMethod scan_method() const {
    if (s_.method == "suffix") return ScanMethod::kSuffixSum;
    if (s_.method == "direct") return ScanMethod::kDirect;
    if (s_.method == "sparse") return ScanMethod::kSparse;
    throw Error(ErrorCode::kInvalidParams, fmt::format("unknown method '{}'", s_.method));
  }

  fs::path output_dir() const {
    std::error_code ec;
    fs::create_directories(s_.out, ec);
    if (ec) throw Error(ErrorCode::kIo, fmt::format("cannot create {}: {}", s_.out, ec.message()));
    return s_.out;
  }

  static void write_snapshot(const fs::path& dir, const json& snapshot) {
    std::ofstream out(dir / "config.json", std::ios::binary);
    out << snapshot.dump(2) << "\n";
    if (!out) throw Error(ErrorCode::kIo, "cannot write config snapshot");
  }

  Settings s_;
  bool horizon_given_;
  std::ostream& out_;
};

// Fills settings from a JSON config for every option not given on the
// command line.
// Returns true when the config supplied the horizon.
bool apply_config(const fs::path& path, Settings& s, const std::map<std::string, CLI::Option*>& opts) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, fmt::format("{}: {}", path.string(), e.what()));
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidParams, "config must be a JSON object");
  const auto take = [&](const char* key, auto& target) {
    if (!j.contains(key) || opts.at(key)->count() > 0) return;
    try {
      j.at(key).get_to(target);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kInvalidParams, fmt::format("config key '{}': {}", key, e.what()));
    }
  };
  take("buy_cost", s.buy_cost);
  take("horizon", s.horizon);
  take("prior", s.prior);
  take("prior_file", s.prior_file);
  take("truth", s.truth);
  take("trials", s.trials);
  take("seed", s.seed);
  take("success_threshold", s.success_threshold);
  take("out", s.out);
  take("policy", s.policy);
  take("lambda", s.lambda);
  take("prediction_noise", s.prediction_noise);
  take("bias", s.bias);
  take("rounds", s.rounds);
  take("predictions", s.predictions);
  for (const auto& [key, value] : j.items()) {
    if (!opts.count(key)) {
      throw Error(ErrorCode::kInvalidParams, fmt::format("unknown config key '{}'", key));
    }
  }
  return j.contains("horizon");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian ski rental: decisions, simulations and experiments", "skirental"};
  app.fallthrough();
  app.require_subcommand(1);

  Settings s;
  std::string config_path;
  std::map<std::string, CLI::Option*> opts;
  opts["buy_cost"] = app.add_option("--buy-cost,-b", s.buy_cost, "Buy cost in rent days (> 1)");
  opts["horizon"] = app.add_option("--horizon,-M", s.horizon, "Horizon bound M");
  opts["prior"] = app.add_option("--prior", s.prior, "Prior family, e.g. gaussian(100,30,500)");
  opts["prior_file"] = app.add_option("--prior-file", s.prior_file, "Prior file of k,weight lines");
  opts["truth"] = app.add_option("--truth", s.truth, "True season-length distribution");
  opts["trials"] = app.add_option("--trials,-n", s.trials, "Monte Carlo trials");
  opts["seed"] = app.add_option("--seed", s.seed, "Base seed");
  opts["success_threshold"] =
      app.add_option("--success-threshold", s.success_threshold, "Success if ratio <= rho");
  opts["out"] = app.add_option("--out,-o", s.out, "Output directory");
  opts["policy"] = app.add_option(
      "--policy", s.policy,
      "bayesian|point|randomized|deterministic|augmented|bayesian_prediction|all");
  opts["lambda"] = app.add_option("--lambda", s.lambda, "Trust parameter of the augmented baseline");
  opts["prediction_noise"] =
      app.add_option("--prediction-noise", s.prediction_noise, "Relative prediction sd (beta)");
  opts["bias"] = app.add_option("--bias", s.bias, "Prediction bias (alpha)");
  opts["rounds"] = app.add_option("--rounds,-R", s.rounds, "Adaptive rounds");
  opts["predictions"] = app.add_option("--predictions", s.predictions, "File of T_hat,sigma lines");
  app.add_option("--config", config_path, "JSON config; flags override its values");

  auto* decide = app.add_subcommand("decide", "Purchase day for a prior");
  decide->add_flag("--trace", s.trace, "Print the per-day E_rent trace");
  decide->add_option("--method", s.method, "suffix|direct|sparse");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo trials -> trials.csv, summary.csv");
  auto* experiment = app.add_subcommand("experiment", "Run q1, q2, q3 or q4");
  experiment->add_option("question", s.question, "q1|q2|q3|q4")->required();
  auto* fuse = app.add_subcommand("fuse", "Fuse predictions into a prior -> fused_prior.csv");
  auto* adapt = app.add_subcommand("adapt", "Adaptive prior learning -> regret.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitValidation;
  }

  try {
    bool horizon_given = opts["horizon"]->count() > 0;
    if (!config_path.empty()) horizon_given = apply_config(config_path, s, opts) || horizon_given;
    Command command(s, horizon_given, out);
    if (decide->parsed()) return command.decide();
    if (simulate->parsed()) return command.simulate();
    if (experiment->parsed()) return command.experiment();
    if (fuse->parsed()) return command.fuse_command();
    if (adapt->parsed()) return command.adapt();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace skirental
