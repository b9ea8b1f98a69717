#pragma once

namespace citefit {

/// Standard normal lower tail Phi(z), via erfc so the left tail keeps full
/// relative precision.
double normal_cdf(double z) noexcept;

/// Standard normal upper tail 1 - Phi(z) without cancellation.
double normal_sf(double z) noexcept;

/// Phi(upper) - Phi(lower) for lower <= upper, evaluated on whichever tail
/// avoids cancellation.
double normal_interval(double lower, double upper) noexcept;

}  // namespace citefit
