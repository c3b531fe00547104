#include "skirental/sampling.hpp"

#include <vector>

namespace skirental {

Day sample_day(const DiscretePrior& prior, Rng& rng) {
  const auto points = prior.support();
  std::vector<double> masses;
  masses.reserve(points.size());
  for (const auto& point : points) masses.push_back(point.mass);
  return points[sample_index(masses, rng)].day;
}

std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

double sample_normal(double mean, double sd, Rng& rng) {
  return std::normal_distribution<double>(mean, sd)(rng);
}

}  // namespace skirental
