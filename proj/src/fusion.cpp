#include "skirental/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "skirental/prior_io.hpp"

namespace skirental {
namespace {

void check_prediction(const Prediction& prediction) {
  if (!std::isfinite(prediction.value)) {
    throw Error(ErrorCode::kInvalidParams, "prediction value is not finite");
  }
  if (!(prediction.sigma > 0.0) || !std::isfinite(prediction.sigma)) {
    throw Error(ErrorCode::kInvalidParams,
                fmt::format("prediction sigma {} must be positive", prediction.sigma));
  }
}

double log_likelihood(const Prediction& prediction, Day k) {
  const double z = (static_cast<double>(k) - prediction.value) / prediction.sigma;
  return -0.5 * z * z;
}

// Multiplies `masses` by exp(log_weight) over the support and renormalizes.
DiscretePrior reweight(const DiscretePrior& prior, const std::vector<double>& log_weight) {
  auto masses = prior.dense_masses();
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > 0.0) peak = std::max(peak, std::log(masses[i]) + log_weight[i]);
  }
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (masses[i] > 0.0) masses[i] = std::exp(std::log(masses[i]) + log_weight[i] - peak);
  }
  try {
    DiscretePrior out = DiscretePrior::from_dense_weights(masses);
    return prior.representation() == Representation::kSparse ? out.to_sparse() : out;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kZeroMass) throw;
    throw Error(ErrorCode::kZeroPosterior, "likelihood annihilated every support point");
  }
}

}  // namespace

DiscretePrior fuse(const DiscretePrior& initial, std::span<const Prediction> predictions) {
  for (const auto& prediction : predictions) check_prediction(prediction);
  DiscretePrior current = initial;
  std::vector<double> log_weight(static_cast<std::size_t>(initial.horizon()));
  for (const auto& prediction : predictions) {
    for (Day k = 1; k <= initial.horizon(); ++k) log_weight[k - 1] = log_likelihood(prediction, k);
    current = reweight(current, log_weight);
  }
  return current;
}

DiscretePrior fuse_joint(const DiscretePrior& initial, std::span<const Prediction> predictions) {
  for (const auto& prediction : predictions) check_prediction(prediction);
  if (predictions.empty()) return initial;
  std::vector<double> log_weight(static_cast<std::size_t>(initial.horizon()), 0.0);
  for (const auto& prediction : predictions) {
    for (Day k = 1; k <= initial.horizon(); ++k) log_weight[k - 1] += log_likelihood(prediction, k);
  }
  return reweight(initial, log_weight);
}

DiscretePrior prediction_to_prior(double predicted, double relative_noise, Day horizon) {
  if (!(relative_noise > 0.0) || !std::isfinite(relative_noise)) {
    throw Error(ErrorCode::kInvalidParams,
                fmt::format("relative noise {} must be positive", relative_noise));
  }
  if (!(predicted > 0.0) || !std::isfinite(predicted)) {
    throw Error(ErrorCode::kInvalidParams,
                fmt::format("prediction {} must be positive", predicted));
  }
  return build_prior({GaussianFamily{predicted, relative_noise * predicted, horizon}, horizon});
}

std::vector<Prediction> load_predictions_file(const std::filesystem::path& path) {
  std::vector<Prediction> out;
  for (const auto& [line_no, content] : data_lines(read_text_file(path))) {
    std::istringstream fields(content);
    Prediction prediction;
    char comma = 0;
    if (!(fields >> prediction.value >> comma >> prediction.sigma) || comma != ',') {
      throw Error(ErrorCode::kInvalidParams,
                  fmt::format("{}:{}: expected 'T_hat,sigma'", path.string(), line_no));
    }
    check_prediction(prediction);
    out.push_back(prediction);
  }
  return out;
}

}  // namespace skirental
