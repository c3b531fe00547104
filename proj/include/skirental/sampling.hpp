#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "skirental/prior.hpp"

namespace skirental {

/// All randomness in the library flows through explicitly seeded engines of
/// this type.
using Rng = std::mt19937_64;

/// Inverse-CDF draw of a day from a prior.
Day sample_day(const DiscretePrior& prior, Rng& rng);

/// Inverse-CDF draw of an index from a pmf (not necessarily normalized).
std::size_t sample_index(std::span<const double> weights, Rng& rng);

double sample_normal(double mean, double sd, Rng& rng);

}  // namespace skirental
