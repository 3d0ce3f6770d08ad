#include "krf/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace krf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kSeriesCutoff = 15.0;

// I0 power series: sum_m (x^2/4)^m / (m!)^2. All terms positive.
double seriesI0(double x) {
  const double x2 = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= 500; ++m) {
    term *= x2 / (static_cast<double>(m) * m);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// I1 power series: (x/2) * sum_m (x^2/4)^m / (m! (m+1)!).
double seriesI1(double x) {
  const double x2 = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= 500; ++m) {
    term *= x2 / (static_cast<double>(m) * (m + 1));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 0.5 * x * sum;
}

// Asymptotic series S(x) with I_nu(x) ~ e^x/sqrt(2 pi x) * S(x).
// Term ratio t_n/t_{n-1} = ((2n-1)^2 - 4 nu^2) / (8 n x); truncated at the
// smallest term, which is O(e^{-2x}) relative for x >= 15.
double asymptoticSum(double x, int nuSquaredTimes4) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n <= 40; ++n) {
    const double next =
        term * (((2.0 * n - 1.0) * (2.0 * n - 1.0)) - nuSquaredTimes4) / (8.0 * n * x);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum;
}

}  // namespace

double besselI0(double x) {
  const double ax = std::abs(x);
  if (ax <= kSeriesCutoff) return seriesI0(ax);
  return std::exp(ax) / std::sqrt(kTwoPi * ax) * asymptoticSum(ax, 0);
}

double besselI1(double x) {
  const double ax = std::abs(x);
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (ax <= kSeriesCutoff) return sign * seriesI1(ax);
  return sign * std::exp(ax) / std::sqrt(kTwoPi * ax) * asymptoticSum(ax, 4);
}

double logBesselI0(double x) {
  if (x < 0.0) throw std::invalid_argument("logBesselI0: negative argument");
  if (x <= kSeriesCutoff) return std::log(seriesI0(x));
  return x - 0.5 * std::log(kTwoPi * x) + std::log(asymptoticSum(x, 0));
}

}  // namespace krf
