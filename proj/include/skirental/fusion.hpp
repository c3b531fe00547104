#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "skirental/prior.hpp"

namespace skirental {

/// Noisy horizon forecast with Gaussian accuracy sigma (days, > 0).
struct Prediction {
  double value = 0.0;
  double sigma = 1.0;
};

/// Sequential Bayesian update pi^(i) ∝ pi^(i-1) L_i(k) with
/// L_i(k) = exp(-(k - value_i)^2 / (2 sigma_i^2)) at integer k,
/// renormalizing after every prediction. Likelihoods are applied in log
/// space and shifted by their maximum over the current support.
DiscretePrior fuse(const DiscretePrior& initial, std::span<const Prediction> predictions);

/// Single update with the product of all likelihoods.
DiscretePrior fuse_joint(const DiscretePrior& initial, std::span<const Prediction> predictions);

/// Discretized truncated Gaussian on 1..M centred on the prediction with
/// sigma = relative_noise * predicted.
DiscretePrior prediction_to_prior(double predicted, double relative_noise, Day horizon);

/// Reads `T_hat,sigma` lines ('#' comments allowed).
std::vector<Prediction> load_predictions_file(const std::filesystem::path& path);

}  // namespace skirental
