#pragma once

#include <optional>
#include <stdexcept>

#include "krf/types.hpp"

namespace krf {

/// Raised when a circular mean is requested for a point set whose resultant
/// vector vanishes (e.g. two antipodal angles). Callers that have a fallback
/// use tryMean() instead.
class DegenerateMeanError : public std::runtime_error {
 public:
  DegenerateMeanError() : std::runtime_error("circular mean is degenerate: resultant length is zero") {}
};

/// Target geometry: Euclidean R^q with squared-distance loss, or the unit
/// circle (angles in radians, stored in [0, 2pi)) with 1-cos loss.
class TargetSpace {
 public:
  enum class Kind { Euclidean, Circular };

  static TargetSpace euclidean(Index q) {
    if (q < 1) throw std::invalid_argument("TargetSpace: Euclidean dimension must be >= 1");
    return TargetSpace(Kind::Euclidean, q);
  }
  static TargetSpace circular() { return TargetSpace(Kind::Circular, 1); }

  Kind kind() const { return kind_; }
  bool isCircular() const { return kind_ == Kind::Circular; }
  /// Target dimensionality q (always 1 for the circle).
  Index dim() const { return dim_; }

  friend bool operator==(const TargetSpace&, const TargetSpace&) = default;

 private:
  TargetSpace(Kind kind, Index dim) : kind_(kind), dim_(dim) {}
  Kind kind_;
  Index dim_;
};

/// Resultant length below this is treated as a vanished circular mean.
inline constexpr double kDegenerateResultant = 1e-12;

inline constexpr double kPi = 3.1415926535897932384626434;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double degreesToRadians(double degrees) { return degrees * (kPi / 180.0); }
inline double radiansToDegrees(double radians) { return radians * (180.0 / kPi); }

/// Wraps an angle into [0, 2pi).
double normalizeAngle(double radians);

/// Pairwise loss: ||t1-t2||^2 (Euclidean) or 1-cos(t1-t2) in [0,2] (circular).
double loss(const TargetSpace& space, const TargetPoint& t1, const TargetPoint& t2);

/// Loss-minimizing mean of the rows of `points` (one target per row).
/// Arithmetic per-dimension mean for Euclidean; circular mean
/// atan2(mean sin, mean cos) normalized to [0, 2pi) for the circle.
/// Throws DegenerateMeanError when the circular resultant vanishes.
TargetPoint mean(const TargetSpace& space, const Matrix& points);

/// Like mean(), but signals circular degeneracy with nullopt.
std::optional<TargetPoint> tryMean(const TargetSpace& space, const Matrix& points);

/// sqrt((mean sin)^2 + (mean cos)^2) of a column of angles; in [0, 1].
double resultantLength(const Matrix& points);

}  // namespace krf
