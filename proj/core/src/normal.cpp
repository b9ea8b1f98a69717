#include "citefit/normal.hpp"

#include <cmath>
#include <numbers>

namespace citefit {

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) noexcept { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double normal_interval(double lower, double upper) noexcept {
  if (lower >= 0.0) return normal_sf(lower) - normal_sf(upper);
  return normal_cdf(upper) - normal_cdf(lower);
}

}  // namespace citefit
