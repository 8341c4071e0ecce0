#pragma once

#include <span>

namespace bcnorm::detail {

/// Tabulated limiting upper tail; linear in log(sf) between knots, with the
/// leading-eigenvalue exponential decay beyond the table.
double ad_limit_sf_interpolated(double a2);

}  // namespace bcnorm::detail
