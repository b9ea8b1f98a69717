#include "citefit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>

#include "citefit/errors.hpp"
#include "citefit/normal.hpp"
#include "citefit/random.hpp"

namespace citefit {
namespace {

constexpr Count kMaxCount = ModelSpec::kMaxQuantile;

void require_atom(Count x) {
  if (x < 1) throw DomainError("support starts at 1, got x = " + std::to_string(x));
}

// Sum over x > from of ((b + x) / (b + 1))^(-alpha): midpoint Euler-Maclaurin
// with the f' and f''' corrections, scaled by (b + 1)^alpha.
double scaled_tail(double alpha, double b, Count from) {
  const double base = b + 1.0;
  const double r = (b + static_cast<double>(from) + 0.5) / base;
  const double integral = base * std::pow(r, 1.0 - alpha) / (alpha - 1.0);
  const double first = alpha * std::pow(r, -alpha - 1.0) / (24.0 * base);
  const double third = 7.0 * alpha * (alpha + 1.0) * (alpha + 2.0) * std::pow(r, -alpha - 3.0) /
                       (5760.0 * base * base * base);
  return integral - first + third;
}

double scaled_term(double alpha, double b, Count x) {
  return std::exp(-alpha * std::log1p(static_cast<double>(x - 1) / (b + 1.0)));
}

// Neumaier-compensated partial sums of scaled terms for x = 1 .. kTruncation.
std::vector<double> scaled_partials(double alpha, double b) {
  std::vector<double> partial(HookedPowerLaw::kTruncation + 1, 0.0);
  double sum = 0.0;
  double carry = 0.0;
  for (Count x = 1; x <= HookedPowerLaw::kTruncation; ++x) {
    const double term = scaled_term(alpha, b, x);
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    partial[static_cast<std::size_t>(x)] = sum + carry;
  }
  return partial;
}

void validate_hooked(double alpha, double b) {
  if (!std::isfinite(alpha) || !(alpha > 1.0)) {
    throw ParameterError("hooked power law needs alpha > 1, got " + std::to_string(alpha));
  }
  if (!std::isfinite(b) || !(b > 0.0)) {
    throw ParameterError("hooked power law needs B > 0, got " + std::to_string(b));
  }
}

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::DiscretisedLognormal:
      return "lognormal";
    case Family::HookedPowerLaw:
      return "hooked";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "lognormal" || name == "ln") return Family::DiscretisedLognormal;
  if (name == "hooked" || name == "hook") return Family::HookedPowerLaw;
  throw ParameterError("unknown distribution family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------

DiscretisedLognormal::DiscretisedLognormal(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) throw ParameterError("lognormal mu must be finite");
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw ParameterError("lognormal sigma must be > 0, got " + std::to_string(sigma));
  }
  lower_z_ = standardise(0.5);
  normalizer_ = normal_sf(lower_z_);
  if (!(normalizer_ > 0.0)) {
    throw ParameterError("lognormal has no mass above 0.5 (mu = " + std::to_string(mu) + ")");
  }
  log_normalizer_ = std::log(normalizer_);
}

double DiscretisedLognormal::standardise(double t) const noexcept {
  return (std::log(t) - mu_) / sigma_;
}

double DiscretisedLognormal::interval_mass(Count x) const {
  require_atom(x);
  const double lower = x == 1 ? lower_z_ : standardise(static_cast<double>(x) - 0.5);
  return normal_interval(lower, standardise(static_cast<double>(x) + 0.5));
}

double DiscretisedLognormal::pmf(Count x) const { return interval_mass(x) / normalizer_; }

double DiscretisedLognormal::log_pmf(Count x) const {
  return std::log(interval_mass(x)) - log_normalizer_;
}

double DiscretisedLognormal::survival(Count x) const {
  require_atom(x);
  return normal_sf(standardise(static_cast<double>(x) + 0.5)) / normalizer_;
}

double DiscretisedLognormal::cdf(Count x) const {
  require_atom(x);
  const double upper = standardise(static_cast<double>(x) + 0.5);
  if (upper < 0.0) return normal_interval(lower_z_, upper) / normalizer_;
  return 1.0 - normal_sf(upper) / normalizer_;
}

// ---------------------------------------------------------------------------

HookedPowerLaw::HookedPowerLaw(double alpha, double b) : alpha_(alpha), b_(b) {
  validate_hooked(alpha, b);
  auto partial = scaled_partials(alpha, b);
  const double scaled = partial.back() + scaled_tail(alpha, b, kTruncation);
  log_normalizer_ = -alpha * std::log(b + 1.0) + std::log(scaled);
  normalizer_ = std::exp(log_normalizer_);
  // Keep partial sums relative to the scaled normalizer: cdf(x) = partial[x].
  for (double& p : partial) p /= scaled;
  partial_ = std::make_shared<const std::vector<double>>(std::move(partial));
}

double HookedPowerLaw::log_pmf(Count x) const {
  require_atom(x);
  return -alpha_ * std::log(b_ + static_cast<double>(x)) - log_normalizer_;
}

double HookedPowerLaw::pmf(Count x) const { return std::exp(log_pmf(x)); }

double HookedPowerLaw::cdf(Count x) const {
  require_atom(x);
  if (x <= kTruncation) return (*partial_)[static_cast<std::size_t>(x)];
  return 1.0 - survival(x);
}

double HookedPowerLaw::survival(Count x) const {
  require_atom(x);
  if (x < kTruncation) return 1.0 - (*partial_)[static_cast<std::size_t>(x)];
  const double log_tail = -alpha_ * std::log(b_ + 1.0) + std::log(scaled_tail(alpha_, b_, x));
  return std::exp(log_tail - log_normalizer_);
}

double HookedPowerLaw::normalizer_for(double alpha, double b) {
  return std::exp(log_normalizer_for(alpha, b));
}

double HookedPowerLaw::log_normalizer_for(double alpha, double b) {
  validate_hooked(alpha, b);
  double sum = 0.0;
  double carry = 0.0;
  for (Count x = 1; x <= kTruncation; ++x) {
    const double term = scaled_term(alpha, b, x);
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  const double scaled = sum + carry + scaled_tail(alpha, b, kTruncation);
  return -alpha * std::log(b + 1.0) + std::log(scaled);
}

double HookedPowerLaw::tail_sum(double alpha, double b, Count from) {
  validate_hooked(alpha, b);
  if (from < kTruncation) {
    throw DomainError("tail_sum needs from >= " + std::to_string(kTruncation));
  }
  return std::exp(-alpha * std::log(b + 1.0)) * scaled_tail(alpha, b, from);
}

// ---------------------------------------------------------------------------

namespace detail {

/// Cumulative probabilities cdf(1), cdf(2), ... grown geometrically on
/// demand. Each growth publishes a new immutable vector, so readers holding
/// an older snapshot are never disturbed.
class CdfCache {
 public:
  static constexpr std::size_t kInitial = 64;
  static constexpr std::size_t kMax = std::size_t{1} << 20;

  using Snapshot = std::shared_ptr<const std::vector<double>>;

  Snapshot load() const {
    std::lock_guard lock(mutex_);
    return table_;
  }

  /// A snapshot whose last entry is >= u, or the largest permitted table.
  Snapshot covering(double u, const ModelSpec& model) {
    if (auto snap = load(); covers(*snap, u)) return snap;
    std::lock_guard lock(mutex_);
    if (covers(*table_, u)) return table_;

    auto grown = std::make_shared<std::vector<double>>(*table_);
    std::size_t target = std::max(kInitial, grown->size());
    while (true) {
      target = std::min(target * 2, kMax);
      grown->reserve(target);
      for (auto x = static_cast<Count>(grown->size()) + 1; grown->size() < target; ++x) {
        grown->push_back(model.cdf(x));
      }
      if (covers(*grown, u)) break;
    }
    table_ = std::move(grown);
    return table_;
  }

  static bool covers(const std::vector<double>& table, double u) noexcept {
    return (!table.empty() && table.back() >= u) || table.size() >= kMax;
  }

 private:
  mutable std::mutex mutex_;
  Snapshot table_ = std::make_shared<const std::vector<double>>();
};

}  // namespace detail

namespace {

// Beyond the cached table, bracket and bisect on survival(x) <= 1 - u.
Count tail_quantile(const ModelSpec& model, double u, Count known_below) {
  const double q = 1.0 - u;
  Count lo = known_below;
  Count hi = std::max<Count>(2 * lo, 2);
  while (model.survival(hi) > q) {
    if (hi >= kMaxCount / 2) return kMaxCount;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const Count mid = lo + (hi - lo) / 2;
    if (model.survival(mid) <= q) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

Count quantile_from(const ModelSpec& model, const std::vector<double>& table, double u) {
  if (!table.empty() && table.back() >= u) {
    const auto it = std::lower_bound(table.begin(), table.end(), u);
    return static_cast<Count>(it - table.begin()) + 1;
  }
  return tail_quantile(model, u, static_cast<Count>(table.size()));
}

}  // namespace

ModelSpec::ModelSpec(DiscretisedLognormal params)
    : params_(std::move(params)), cache_(std::make_shared<detail::CdfCache>()) {}

ModelSpec::ModelSpec(HookedPowerLaw params)
    : params_(std::move(params)), cache_(std::make_shared<detail::CdfCache>()) {}

Family ModelSpec::family() const noexcept {
  return as_lognormal() != nullptr ? Family::DiscretisedLognormal : Family::HookedPowerLaw;
}

std::array<double, 2> ModelSpec::parameters() const noexcept {
  if (const auto* ln = as_lognormal()) return {ln->mu(), ln->sigma()};
  const auto* hook = as_hooked();
  return {hook->alpha(), hook->b()};
}

std::string ModelSpec::describe() const {
  const auto [p, q] = parameters();
  if (family() == Family::DiscretisedLognormal) {
    return "lognormal(mu=" + fmt_param(p) + ", sigma=" + fmt_param(q) + ")";
  }
  return "hooked(alpha=" + fmt_param(p) + ", B=" + fmt_param(q) + ")";
}

double ModelSpec::pmf(Count x) const {
  return std::visit([x](const auto& m) { return m.pmf(x); }, params_);
}

double ModelSpec::log_pmf(Count x) const {
  return std::visit([x](const auto& m) { return m.log_pmf(x); }, params_);
}

double ModelSpec::cdf(Count x) const {
  return std::visit([x](const auto& m) { return m.cdf(x); }, params_);
}

double ModelSpec::survival(Count x) const {
  return std::visit([x](const auto& m) { return m.survival(x); }, params_);
}

Count ModelSpec::quantile(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile needs u in [0, 1)");
  const auto table = cache_->covering(u, *this);
  return quantile_from(*this, *table, u);
}

double pmf(const ModelSpec& model, Count x) { return model.pmf(x); }
double cdf(const ModelSpec& model, Count x) { return model.cdf(x); }
Count quantile(const ModelSpec& model, double u) { return model.quantile(u); }

CitationSample sample(const ModelSpec& model, std::size_t n, std::uint64_t seed) {
  CitationSample out;
  out.counts.reserve(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) out.counts.push_back(model.quantile(rng.uniform01()));
  return out;
}

Moments continuous_moments(const ModelSpec& model) {
  if (const auto* ln = model.as_lognormal()) {
    const double s2 = ln->sigma() * ln->sigma();
    return {std::exp(ln->mu() + s2 / 2.0),
            std::sqrt(std::expm1(s2) * std::exp(2.0 * ln->mu() + s2))};
  }
  const auto* hook = model.as_hooked();
  const double alpha = hook->alpha();
  const double mean = hook->b() / (alpha - 1.0);
  if (alpha <= 2.0) return {mean, std::nullopt};
  return {mean, mean * std::sqrt(alpha / (alpha - 2.0))};
}

double continuous_sd(const ModelSpec& model) {
  const auto moments = continuous_moments(model);
  if (!moments.sd) {
    throw MomentUndefined("Lomax standard deviation is infinite for alpha <= 2 (" +
                          model.describe() + ")");
  }
  return *moments.sd;
}

}  // namespace citefit
