#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "skirental/error.hpp"

namespace skirental {

/// Day index. Horizons are 1-based: a prior over a horizon bound M covers
/// days 1..M, and M+1 is used as the "never buy" purchase day.
using Day = std::int32_t;

struct SupportPoint {
  Day day = 0;
  double mass = 0.0;

  friend bool operator==(const SupportPoint&, const SupportPoint&) = default;
};

// ---------------------------------------------------------------------------
// Family specifications.
// ---------------------------------------------------------------------------

struct UniformFamily {
  Day n = 1;
};

/// pi_k proportional to p (1-p)^(k-1) on 1..n.
struct GeometricFamily {
  double p = 0.5;
  Day n = 1;
};

/// pi_k proportional to exp(-(k-mu)^2 / (2 sigma^2)) on 1..n, evaluated at
/// integer k.
struct GaussianFamily {
  double mu = 0.0;
  double sigma = 1.0;
  Day n = 1;
};

struct PointMassFamily {
  Day k = 1;
};

/// Unnormalized (day, weight) pairs with distinct days.
struct ExplicitFamily {
  std::vector<SupportPoint> weights;
};

struct MixtureComponent;

struct MixtureFamily {
  std::vector<MixtureComponent> components;
};

using Family = std::variant<UniformFamily, GeometricFamily, GaussianFamily,
                            PointMassFamily, ExplicitFamily, MixtureFamily>;

struct MixtureComponent {
  double weight = 0.0;
  Family family;
};

struct PriorFamilySpec {
  Family family;
  Day horizon = 1;
};

// ---------------------------------------------------------------------------
// DiscretePrior
// ---------------------------------------------------------------------------

enum class Representation { kDense, kSparse };

/// Normalized pmf over days 1..M. Immutable once built.
///
/// Construction always renormalizes and flushes masses below the smallest
/// normal double to zero, so every stored mass is either 0 or a normal
/// number and the total is 1 within 1e-12.
class DiscretePrior {
 public:
  /// `weights[i]` is the weight of day i+1. Throws ZeroMass when every weight
  /// is zero and InvalidSpec on negative or non-finite weights.
  static DiscretePrior from_dense_weights(std::span<const double> weights);

  /// Points must have strictly increasing days inside [1, horizon].
  static DiscretePrior from_sparse_weights(Day horizon,
                                           std::span<const SupportPoint> points);

  Day horizon() const noexcept { return horizon_; }
  Representation representation() const noexcept { return representation_; }

  /// pi_k; throws OutOfRange outside 1..M.
  double mass(Day k) const;

  /// Dense masses, index i holds day i+1.
  std::vector<double> dense_masses() const;
  /// Nonzero support points in increasing day order.
  std::vector<SupportPoint> support() const;

  Day first_support_day() const;
  Day last_support_day() const;

  double mean() const;
  double variance() const;

  /// Conversions copy masses bit-for-bit; no renormalization happens.
  DiscretePrior to_dense() const;
  DiscretePrior to_sparse() const;

  /// Family the prior was built from, if any. Used by `perturb`.
  const PriorFamilySpec* family() const noexcept { return family_.get(); }
  DiscretePrior with_family(PriorFamilySpec spec) const;

 private:
  DiscretePrior() = default;

  Day horizon_ = 0;
  Representation representation_ = Representation::kDense;
  std::vector<double> dense_;
  std::vector<SupportPoint> sparse_;
  std::shared_ptr<const PriorFamilySpec> family_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Uniform, geometric and Gaussian families build dense priors; point masses
/// and explicit lists build sparse ones. Mixtures are dense.
DiscretePrior build_prior(const PriorFamilySpec& spec);

/// Throws InvalidSpec describing the first violated constraint.
void validate(const PriorFamilySpec& spec);

/// Pr(T >= t) for t in 1..M+1, accumulated from day M downwards.
double survival(const DiscretePrior& prior, Day t);

/// pi_t / Pr(T >= t). Throws ZeroSurvival when the tail is empty.
double hazard(const DiscretePrior& prior, Day t);

double tv_distance(const DiscretePrior& a, const DiscretePrior& b);

/// True when the support is a contiguous run of days and
/// pi_k^2 >= pi_{k-1} pi_{k+1} (1 - rel_tol) holds at every interior day.
bool is_log_concave(const DiscretePrior& prior, double rel_tol = 1e-12);

struct MeanShift {
  double delta = 0.0;
};
struct VarianceScale {
  double factor = 1.0;
};
enum class ShapeFamily { kUniform, kGeometric, kGaussian };
struct ShapeSwap {
  ShapeFamily target = ShapeFamily::kGaussian;
};
using Perturbation = std::variant<MeanShift, VarianceScale, ShapeSwap>;

/// Misspecification transforms.
///
/// MeanShift rebuilds Gaussian priors (and mixtures of Gaussians) with a
/// shifted location. Any other prior has its support moved by round(delta)
/// days; mass pushed outside 1..M is dropped before renormalizing. Explicit
/// priors, and priors without a recorded family, reject fractional shifts.
///
/// VarianceScale multiplies every Gaussian sigma by `factor`; it is only
/// defined for Gaussian priors and mixtures of Gaussians.
///
/// ShapeSwap rebuilds in the target family matching the prior's mean, and
/// its standard deviation when the target is Gaussian.
DiscretePrior perturb(const DiscretePrior& prior, const Perturbation& kind);

/// Mean of GeometricFamily{p, n} in closed form.
double truncated_geometric_mean(double p, Day n);

}  // namespace skirental
