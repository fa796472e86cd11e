#pragma once

namespace ulp {

/// Inverse error function on (-1, 1). Throws Error{ParameterDomain} for
/// |y| >= 1 or NaN. Accurate to a few ulps of erf over the open interval.
double erf_inv(double y);

}  // namespace ulp
