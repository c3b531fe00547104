#include "skirental/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace skirental {
namespace {

constexpr double kNormalizationTolerance = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

[[noreturn]] void invalid_spec(const std::string& what) {
  throw Error(ErrorCode::kInvalidSpec, what);
}

// Divides by the total, flushes subnormal masses and renormalizes if anything
// was flushed. Returns false when the total is zero.
bool normalize_in_place(std::span<double> masses) {
  double total = 0.0;
  for (double w : masses) total += w;
  if (!(total > 0.0)) return false;
  bool flushed = false;
  for (double& w : masses) {
    w /= total;
    if (w != 0.0 && w < std::numeric_limits<double>::min()) {
      w = 0.0;
      flushed = true;
    }
  }
  if (flushed) {
    total = 0.0;
    for (double w : masses) total += w;
    if (!(total > 0.0)) return false;
    for (double& w : masses) w /= total;
  }
  return true;
}

void check_weight(double w) {
  if (!std::isfinite(w) || w < 0.0) {
    invalid_spec(fmt::format("weight {} is negative or not finite", w));
  }
}

void validate_family(const Family& family, Day horizon) {
  std::visit(
      Overloaded{
          [&](const UniformFamily& f) {
            if (f.n < 1 || f.n > horizon) {
              invalid_spec(fmt::format("uniform N={} outside [1, {}]", f.n, horizon));
            }
          },
          [&](const GeometricFamily& f) {
            if (!(f.p > 0.0 && f.p < 1.0)) {
              invalid_spec(fmt::format("geometric p={} outside (0, 1)", f.p));
            }
            if (f.n < 1 || f.n > horizon) {
              invalid_spec(fmt::format("geometric N={} outside [1, {}]", f.n, horizon));
            }
          },
          [&](const GaussianFamily& f) {
            if (!std::isfinite(f.mu)) invalid_spec("gaussian mu is not finite");
            if (!(f.sigma > 0.0) || !std::isfinite(f.sigma)) {
              invalid_spec(fmt::format("gaussian sigma={} must be positive", f.sigma));
            }
            if (f.n < 1 || f.n > horizon) {
              invalid_spec(fmt::format("gaussian N={} outside [1, {}]", f.n, horizon));
            }
          },
          [&](const PointMassFamily& f) {
            if (f.k < 1 || f.k > horizon) {
              invalid_spec(fmt::format("point mass day {} outside [1, {}]", f.k, horizon));
            }
          },
          [&](const ExplicitFamily& f) {
            std::vector<Day> days;
            for (const auto& point : f.weights) {
              if (point.day < 1 || point.day > horizon) {
                invalid_spec(fmt::format("explicit day {} outside [1, {}]", point.day, horizon));
              }
              check_weight(point.mass);
              days.push_back(point.day);
            }
            std::sort(days.begin(), days.end());
            if (std::adjacent_find(days.begin(), days.end()) != days.end()) {
              invalid_spec("explicit prior lists a day twice");
            }
          },
          [&](const MixtureFamily& f) {
            if (f.components.empty()) invalid_spec("mixture has no components");
            double total = 0.0;
            for (const auto& c : f.components) {
              check_weight(c.weight);
              total += c.weight;
              validate_family(c.family, horizon);
            }
            if (std::abs(total - 1.0) > kNormalizationTolerance) {
              invalid_spec(fmt::format("mixture weights sum to {}, not 1", total));
            }
          },
      },
      family);
}

std::vector<double> family_weights(const Family& family, Day horizon) {
  std::vector<double> w(static_cast<std::size_t>(horizon), 0.0);
  std::visit(
      Overloaded{
          [&](const UniformFamily& f) {
            std::fill(w.begin(), w.begin() + f.n, 1.0);
          },
          [&](const GeometricFamily& f) {
            const double log_q = std::log1p(-f.p);
            for (Day k = 1; k <= f.n; ++k) {
              w[k - 1] = f.p * std::exp(static_cast<double>(k - 1) * log_q);
            }
          },
          [&](const GaussianFamily& f) {
            // Shift by the largest exponent so at least one weight is 1.
            const auto exponent = [&](Day k) {
              const double z = (static_cast<double>(k) - f.mu) / f.sigma;
              return -0.5 * z * z;
            };
            const double nearest = std::clamp(std::round(f.mu), 1.0, static_cast<double>(f.n));
            const double peak = exponent(static_cast<Day>(nearest));
            for (Day k = 1; k <= f.n; ++k) w[k - 1] = std::exp(exponent(k) - peak);
          },
          [&](const PointMassFamily& f) { w[f.k - 1] = 1.0; },
          [&](const ExplicitFamily& f) {
            for (const auto& point : f.weights) w[point.day - 1] = point.mass;
          },
          [&](const MixtureFamily& f) {
            for (const auto& c : f.components) {
              std::vector<double> part = family_weights(c.family, horizon);
              if (!normalize_in_place(part)) {
                throw Error(ErrorCode::kZeroMass, "mixture component has zero mass");
              }
              for (std::size_t i = 0; i < w.size(); ++i) w[i] += c.weight * part[i];
            }
          },
      },
      family);
  return w;
}

bool is_gaussian_only(const Family& family) {
  if (std::holds_alternative<GaussianFamily>(family)) return true;
  if (const auto* mix = std::get_if<MixtureFamily>(&family)) {
    return std::all_of(mix->components.begin(), mix->components.end(),
                       [](const MixtureComponent& c) { return is_gaussian_only(c.family); });
  }
  return false;
}

// Applies `edit` to every Gaussian inside a Gaussian-only family.
template <class Edit>
Family map_gaussians(const Family& family, Edit edit) {
  if (const auto* g = std::get_if<GaussianFamily>(&family)) return edit(*g);
  MixtureFamily out;
  for (const auto& c : std::get<MixtureFamily>(family).components) {
    out.components.push_back({c.weight, map_gaussians(c.family, edit)});
  }
  return out;
}

[[noreturn]] void invalid_perturbation(const std::string& what) {
  throw Error(ErrorCode::kInvalidPerturbation, what);
}

DiscretePrior shift_support(const DiscretePrior& prior, double delta) {
  const PriorFamilySpec* family = prior.family();
  const bool exact_days_only =
      family == nullptr || std::holds_alternative<ExplicitFamily>(family->family);
  if (exact_days_only && delta != std::round(delta)) {
    invalid_perturbation(fmt::format("fractional shift {} of a non-parametric prior", delta));
  }
  const auto shift = static_cast<Day>(std::round(delta));
  ExplicitFamily shifted;
  for (const auto& point : prior.support()) {
    const Day day = point.day + shift;
    if (day >= 1 && day <= prior.horizon()) shifted.weights.push_back({day, point.mass});
  }
  if (shifted.weights.empty()) {
    invalid_perturbation(fmt::format("shift {} moves all mass outside the horizon", shift));
  }
  PriorFamilySpec spec{shifted, prior.horizon()};
  DiscretePrior out = build_prior(spec);
  return prior.representation() == Representation::kDense ? out.to_dense() : out;
}

double solve_geometric_p(double target_mean, Day n) {
  // The truncated mean decreases from (n+1)/2 (p -> 0) to 1 (p -> 1).
  double lo = 1e-12;
  double hi = 1.0 - 1e-12;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_geometric_mean(mid, n) > target_mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscretePrior
// ---------------------------------------------------------------------------

DiscretePrior DiscretePrior::from_dense_weights(std::span<const double> weights) {
  if (weights.empty()) invalid_spec("empty horizon");
  for (double w : weights) check_weight(w);
  DiscretePrior prior;
  prior.horizon_ = static_cast<Day>(weights.size());
  prior.representation_ = Representation::kDense;
  prior.dense_.assign(weights.begin(), weights.end());
  if (!normalize_in_place(prior.dense_)) {
    throw Error(ErrorCode::kZeroMass, "all weights are zero");
  }
  return prior;
}

DiscretePrior DiscretePrior::from_sparse_weights(Day horizon,
                                                 std::span<const SupportPoint> points) {
  if (horizon < 1) invalid_spec("empty horizon");
  Day previous = 0;
  for (const auto& point : points) {
    if (point.day <= previous || point.day > horizon) {
      invalid_spec(fmt::format("sparse day {} not strictly increasing inside [1, {}]",
                               point.day, horizon));
    }
    check_weight(point.mass);
    previous = point.day;
  }
  std::vector<double> masses;
  masses.reserve(points.size());
  for (const auto& point : points) masses.push_back(point.mass);
  if (!normalize_in_place(masses)) throw Error(ErrorCode::kZeroMass, "all weights are zero");

  DiscretePrior prior;
  prior.horizon_ = horizon;
  prior.representation_ = Representation::kSparse;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (masses[i] > 0.0) prior.sparse_.push_back({points[i].day, masses[i]});
  }
  return prior;
}

double DiscretePrior::mass(Day k) const {
  if (k < 1 || k > horizon_) {
    throw Error(ErrorCode::kOutOfRange, fmt::format("day {} outside [1, {}]", k, horizon_));
  }
  if (representation_ == Representation::kDense) return dense_[k - 1];
  const auto it = std::lower_bound(sparse_.begin(), sparse_.end(), k,
                                   [](const SupportPoint& p, Day d) { return p.day < d; });
  return (it != sparse_.end() && it->day == k) ? it->mass : 0.0;
}

std::vector<double> DiscretePrior::dense_masses() const {
  if (representation_ == Representation::kDense) return dense_;
  std::vector<double> out(static_cast<std::size_t>(horizon_), 0.0);
  for (const auto& point : sparse_) out[point.day - 1] = point.mass;
  return out;
}

std::vector<SupportPoint> DiscretePrior::support() const {
  if (representation_ == Representation::kSparse) return sparse_;
  std::vector<SupportPoint> out;
  for (Day k = 1; k <= horizon_; ++k) {
    if (dense_[k - 1] > 0.0) out.push_back({k, dense_[k - 1]});
  }
  return out;
}

Day DiscretePrior::first_support_day() const {
  if (representation_ == Representation::kSparse) return sparse_.front().day;
  Day k = 1;
  while (dense_[k - 1] == 0.0) ++k;
  return k;
}

Day DiscretePrior::last_support_day() const {
  if (representation_ == Representation::kSparse) return sparse_.back().day;
  Day k = horizon_;
  while (dense_[k - 1] == 0.0) --k;
  return k;
}

double DiscretePrior::mean() const {
  double m = 0.0;
  for (const auto& point : support()) m += point.day * point.mass;
  return m;
}

double DiscretePrior::variance() const {
  const double m = mean();
  double v = 0.0;
  for (const auto& point : support()) {
    const double d = point.day - m;
    v += d * d * point.mass;
  }
  return v;
}

DiscretePrior DiscretePrior::to_dense() const {
  DiscretePrior out = *this;
  out.representation_ = Representation::kDense;
  out.dense_ = dense_masses();
  out.sparse_.clear();
  return out;
}

DiscretePrior DiscretePrior::to_sparse() const {
  DiscretePrior out = *this;
  out.representation_ = Representation::kSparse;
  out.sparse_ = support();
  out.dense_.clear();
  return out;
}

DiscretePrior DiscretePrior::with_family(PriorFamilySpec spec) const {
  DiscretePrior out = *this;
  out.family_ = std::make_shared<const PriorFamilySpec>(std::move(spec));
  return out;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

void validate(const PriorFamilySpec& spec) {
  if (spec.horizon < 1) invalid_spec(fmt::format("horizon {} < 1", spec.horizon));
  validate_family(spec.family, spec.horizon);
}

DiscretePrior build_prior(const PriorFamilySpec& spec) {
  validate(spec);
  DiscretePrior prior = [&] {
    if (const auto* point = std::get_if<PointMassFamily>(&spec.family)) {
      const SupportPoint only{point->k, 1.0};
      return DiscretePrior::from_sparse_weights(spec.horizon, std::span(&only, 1));
    }
    if (const auto* list = std::get_if<ExplicitFamily>(&spec.family)) {
      std::vector<SupportPoint> sorted = list->weights;
      std::sort(sorted.begin(), sorted.end(),
                [](const SupportPoint& a, const SupportPoint& b) { return a.day < b.day; });
      return DiscretePrior::from_sparse_weights(spec.horizon, sorted);
    }
    return DiscretePrior::from_dense_weights(family_weights(spec.family, spec.horizon));
  }();
  return prior.with_family(spec);
}

double survival(const DiscretePrior& prior, Day t) {
  if (t < 1 || t > prior.horizon() + 1) {
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("survival day {} outside [1, {}]", t, prior.horizon() + 1));
  }
  const auto points = prior.support();
  double tail = 0.0;
  for (auto it = points.rbegin(); it != points.rend() && it->day >= t; ++it) tail += it->mass;
  return tail;
}

double hazard(const DiscretePrior& prior, Day t) {
  const double tail = survival(prior, t);
  if (!(tail > 0.0)) {
    throw Error(ErrorCode::kZeroSurvival, fmt::format("no mass at or after day {}", t));
  }
  return prior.mass(t) / tail;
}

double tv_distance(const DiscretePrior& a, const DiscretePrior& b) {
  if (a.horizon() != b.horizon()) {
    throw Error(ErrorCode::kMismatchedHorizon,
                fmt::format("horizons {} and {} differ", a.horizon(), b.horizon()));
  }
  const auto da = a.dense_masses();
  const auto db = b.dense_masses();
  double total = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) total += std::abs(da[i] - db[i]);
  return 0.5 * total;
}

bool is_log_concave(const DiscretePrior& prior, double rel_tol) {
  const Day first = prior.first_support_day();
  const Day last = prior.last_support_day();
  const auto masses = prior.dense_masses();
  for (Day k = first; k <= last; ++k) {
    if (masses[k - 1] == 0.0) return false;
  }
  for (Day k = first + 1; k < last; ++k) {
    const double centre = masses[k - 1];
    if (centre * centre < masses[k - 2] * masses[k] * (1.0 - rel_tol)) return false;
  }
  return true;
}

DiscretePrior perturb(const DiscretePrior& prior, const Perturbation& kind) {
  const PriorFamilySpec* family = prior.family();
  const Day horizon = prior.horizon();
  return std::visit(
      Overloaded{
          [&](const MeanShift& shift) -> DiscretePrior {
            if (!std::isfinite(shift.delta)) invalid_perturbation("shift is not finite");
            if (shift.delta == 0.0) return prior;
            if (family != nullptr && is_gaussian_only(family->family)) {
              return build_prior({map_gaussians(family->family,
                                                [&](GaussianFamily g) {
                                                  g.mu += shift.delta;
                                                  return g;
                                                }),
                                  horizon});
            }
            return shift_support(prior, shift.delta);
          },
          [&](const VarianceScale& scale) -> DiscretePrior {
            if (!(scale.factor > 0.0) || !std::isfinite(scale.factor)) {
              invalid_perturbation(fmt::format("variance scale {} must be positive", scale.factor));
            }
            if (scale.factor == 1.0) return prior;
            if (family == nullptr || !is_gaussian_only(family->family)) {
              invalid_perturbation("variance scaling needs a Gaussian prior");
            }
            return build_prior({map_gaussians(family->family,
                                              [&](GaussianFamily g) {
                                                g.sigma *= scale.factor;
                                                return g;
                                              }),
                                horizon});
          },
          [&](const ShapeSwap& swap) -> DiscretePrior {
            const double m = prior.mean();
            switch (swap.target) {
              case ShapeFamily::kUniform: {
                const auto n = static_cast<Day>(
                    std::clamp(std::round(2.0 * m - 1.0), 1.0, static_cast<double>(horizon)));
                return build_prior({UniformFamily{n}, horizon});
              }
              case ShapeFamily::kGeometric: {
                if (!(m > 1.0) || !(m < 0.5 * (horizon + 1.0))) {
                  invalid_perturbation(fmt::format(
                      "mean {} unreachable by a geometric prior on [1, {}]", m, horizon));
                }
                return build_prior({GeometricFamily{solve_geometric_p(m, horizon), horizon},
                                    horizon});
              }
              case ShapeFamily::kGaussian: {
                const double sd = std::sqrt(prior.variance());
                if (!(sd > 0.0)) invalid_perturbation("prior has zero variance");
                return build_prior({GaussianFamily{m, sd, horizon}, horizon});
              }
            }
            invalid_perturbation("unknown target family");
          },
      },
      kind);
}

double truncated_geometric_mean(double p, Day n) {
  const double q_n = std::exp(static_cast<double>(n) * std::log1p(-p));
  return 1.0 / p - static_cast<double>(n) * q_n / (-std::expm1(static_cast<double>(n) * std::log1p(-p)));
}

}  // namespace skirental
