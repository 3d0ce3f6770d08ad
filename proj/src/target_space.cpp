#include "krf/target_space.hpp"

#include <cmath>

namespace krf {

namespace {

void checkDim(const TargetSpace& space, const TargetPoint& t, const char* what) {
  if (t.size() != space.dim()) {
    throw std::invalid_argument(std::string(what) + ": target dimension mismatch");
  }
}

}  // namespace

double normalizeAngle(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;  // fmod can land exactly on 2pi after the wrap
  return a;
}

double loss(const TargetSpace& space, const TargetPoint& t1, const TargetPoint& t2) {
  checkDim(space, t1, "loss");
  checkDim(space, t2, "loss");
  if (space.isCircular()) {
    return 1.0 - std::cos(t1[0] - t2[0]);
  }
  return (t1 - t2).squaredNorm();
}

std::optional<TargetPoint> tryMean(const TargetSpace& space, const Matrix& points) {
  if (points.rows() == 0) throw std::invalid_argument("mean: empty point set");
  if (points.cols() != space.dim()) throw std::invalid_argument("mean: target dimension mismatch");
  if (!space.isCircular()) {
    return TargetPoint(points.colwise().mean());
  }
  const double s = points.col(0).array().sin().mean();
  const double c = points.col(0).array().cos().mean();
  if (std::sqrt(s * s + c * c) < kDegenerateResultant) return std::nullopt;
  TargetPoint out(1);
  out[0] = normalizeAngle(std::atan2(s, c));
  return out;
}

TargetPoint mean(const TargetSpace& space, const Matrix& points) {
  auto m = tryMean(space, points);
  if (!m) throw DegenerateMeanError();
  return *std::move(m);
}

double resultantLength(const Matrix& points) {
  if (points.rows() == 0) throw std::invalid_argument("resultantLength: empty point set");
  if (points.cols() != 1) throw std::invalid_argument("resultantLength: expects one angle per row");
  const double s = points.col(0).array().sin().mean();
  const double c = points.col(0).array().cos().mean();
  return std::sqrt(s * s + c * c);
}

}  // namespace krf
