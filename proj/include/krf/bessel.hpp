#pragma once

namespace krf {

/// Modified Bessel functions of the first kind, orders 0 and 1.
///
/// Power series for |x| <= 15, asymptotic expansion e^x/sqrt(2 pi x) * S(x)
/// beyond; the two agree to better than 1e-12 relative at the seam and the
/// absolute accuracy is ~1e-13 relative across the representable range
/// (overflow past x ~ 709 returns inf; use logBesselI0 there).
double besselI0(double x);
double besselI1(double x);

/// ln I0(x) for x >= 0, finite for arbitrarily large x (log-domain
/// asymptotic form x - ln(2 pi x)/2 + ln S(x) once the series would
/// overflow).
double logBesselI0(double x);

}  // namespace krf
