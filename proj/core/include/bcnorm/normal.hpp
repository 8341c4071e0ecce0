#pragma once

namespace bcnorm {

/// Clamp applied to P values before the Z transform keeps Z finite.
inline constexpr double kPFloor = 1e-15;

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

/// Upper tail 1 - normal_cdf(z) without cancellation.
double normal_sf(double z) noexcept;

/// Standard normal quantile (Wichura's AS 241, relative accuracy ~1e-16).
/// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

/// Z = normal_quantile(p) after clamping p to [kPFloor, 1 - kPFloor].
double p_to_z(double p);

}  // namespace bcnorm
