#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "citefit/sample.hpp"

namespace citefit {

enum class Family { DiscretisedLognormal, HookedPowerLaw };

std::string_view to_string(Family family) noexcept;

/// Accepts "lognormal", "ln", "hooked", "hook" (case-sensitive).
Family parse_family(std::string_view name);

/// Lognormal density integrated over (x - 0.5, x + 0.5], renormalised by the
/// mass on (0.5, inf). Support is {1, 2, 3, ...}.
class DiscretisedLognormal {
 public:
  DiscretisedLognormal(double mu, double sigma);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  /// Lognormal mass on (0.5, inf).
  double normalizer() const noexcept { return normalizer_; }

  double pmf(Count x) const;
  double log_pmf(Count x) const;
  double cdf(Count x) const;
  /// P(X > x).
  double survival(Count x) const;

  /// Phi((ln(x + 0.5) - mu) / sigma) - Phi((ln(x - 0.5) - mu) / sigma), i.e.
  /// the unnormalised mass of atom x.
  double interval_mass(Count x) const;

 private:
  double standardise(double t) const noexcept;

  double mu_;
  double sigma_;
  double lower_z_;
  double normalizer_;
  double log_normalizer_;
};

/// Mass proportional to (b + x)^(-alpha) on {1, 2, 3, ...}.
///
/// The normalizer is summed exactly up to kTruncation and the remainder is
/// taken from a midpoint Euler-Maclaurin expansion of the tail, which keeps
/// the relative error far below 1e-10 for every alpha > 1.
class HookedPowerLaw {
 public:
  static constexpr Count kTruncation = 1000;

  HookedPowerLaw(double alpha, double b);

  double alpha() const noexcept { return alpha_; }
  double b() const noexcept { return b_; }
  double normalizer() const noexcept { return normalizer_; }

  double pmf(Count x) const;
  double log_pmf(Count x) const;
  double cdf(Count x) const;
  double survival(Count x) const;

  /// Sum over x >= 1 of (b + x)^(-alpha).
  static double normalizer_for(double alpha, double b);
  /// Logarithm of normalizer_for, without underflow for large alpha.
  static double log_normalizer_for(double alpha, double b);

  /// Sum over x > from of (b + x)^(-alpha), for from >= kTruncation.
  static double tail_sum(double alpha, double b, Count from);

 private:
  double alpha_;
  double b_;
  double normalizer_;
  double log_normalizer_;
  // partial_[k] = cdf(k) for k in [0, kTruncation]
  std::shared_ptr<const std::vector<double>> partial_;
};

namespace detail {
class CdfCache;
}

/// One fitted or generating model: exactly one family with its parameters.
///
/// Copies share a lazily grown cumulative table used by quantile(); the table
/// only depends on the parameters, so sharing it is invisible to callers and
/// safe across threads.
class ModelSpec {
 public:
  using Params = std::variant<DiscretisedLognormal, HookedPowerLaw>;

  ModelSpec(DiscretisedLognormal params);
  ModelSpec(HookedPowerLaw params);

  static ModelSpec lognormal(double mu, double sigma) {
    return ModelSpec(DiscretisedLognormal(mu, sigma));
  }
  static ModelSpec hooked(double alpha, double b) {
    return ModelSpec(HookedPowerLaw(alpha, b));
  }

  Family family() const noexcept;
  const Params& params() const noexcept { return params_; }
  const DiscretisedLognormal* as_lognormal() const noexcept {
    return std::get_if<DiscretisedLognormal>(&params_);
  }
  const HookedPowerLaw* as_hooked() const noexcept {
    return std::get_if<HookedPowerLaw>(&params_);
  }

  /// (mu, sigma) or (alpha, b).
  std::array<double, 2> parameters() const noexcept;
  std::string describe() const;

  double pmf(Count x) const;
  double log_pmf(Count x) const;
  double cdf(Count x) const;
  double survival(Count x) const;

  /// Smallest x >= 1 with cdf(x) >= u, for u in [0, 1).
  /// Saturates at kMaxQuantile when that x is not representable.
  Count quantile(double u) const;

  static constexpr Count kMaxQuantile = Count{1} << 62;

 private:
  Params params_;
  std::shared_ptr<detail::CdfCache> cache_;
};

double pmf(const ModelSpec& model, Count x);
double cdf(const ModelSpec& model, Count x);
Count quantile(const ModelSpec& model, double u);

/// n independent draws by inverse transform of seeded uniforms. The same
/// (model, n, seed) always yields the same sample.
CitationSample sample(const ModelSpec& model, std::size_t n, std::uint64_t seed);

/// Moments of the continuous analogue (lognormal or Lomax). These only
/// approximate the moments of the discretised distributions.
struct Moments {
  double mean;
  /// Empty when the variance is infinite (hooked power law with alpha <= 2).
  std::optional<double> sd;
};

Moments continuous_moments(const ModelSpec& model);

/// As continuous_moments(model).sd, throwing MomentUndefined when infinite.
double continuous_sd(const ModelSpec& model);

}  // namespace citefit
