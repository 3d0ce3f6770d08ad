// Shared independent oracles for the unit and acceptance suites. Everything
// here recomputes results from first principles, without calling the library
// code under test (beyond basic types), so agreement is meaningful.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "krf/rng.hpp"
#include "krf/target_space.hpp"
#include "krf/types.hpp"

namespace krf::testing {

// Loss of one cluster about its own optimal center, in closed form:
// Euclidean sum ||t||^2 - ||sum t||^2 / n; circular n - |sum unit vectors|
// (valid even when the circular mean is degenerate).
inline double partLoss(const TargetSpace& space, const Matrix& targets,
                       const std::vector<Index>& rows) {
  if (rows.empty()) return 0.0;
  const double n = static_cast<double>(rows.size());
  if (space.isCircular()) {
    double s = 0.0;
    double c = 0.0;
    for (Index r : rows) {
      s += std::sin(targets(r, 0));
      c += std::cos(targets(r, 0));
    }
    return n - std::hypot(s, c);
  }
  double sumSq = 0.0;
  Vector sum = Vector::Zero(targets.cols());
  for (Index r : rows) {
    sumSq += targets.row(r).squaredNorm();
    sum += targets.row(r).transpose();
  }
  return std::max(0.0, sumSq - sum.squaredNorm() / n);
}

// Minimum summed loss over every assignment of N targets to at most k
// clusters, by exhaustive enumeration of all k^N labelings. Feasible for
// N <= 8, k <= 3.
inline double bruteForcePartitionObjective(const TargetSpace& space, const Matrix& targets,
                                           int k) {
  const Index n = targets.rows();
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<std::vector<Index>> parts(static_cast<std::size_t>(k));
    for (Index i = 0; i < n; ++i) {
      parts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
    }
    double total = 0.0;
    for (const auto& part : parts) total += partLoss(space, targets, part);
    best = std::min(best, total);
    Index carry = 0;
    while (carry < n) {
      if (++assignment[static_cast<std::size_t>(carry)] < k) break;
      assignment[static_cast<std::size_t>(carry)] = 0;
      ++carry;
    }
    if (carry == n) break;
  }
  return best;
}

// Reference minimizer of J(w) = 1/2 ||w||^2 + C sum max(0, 1 - y_i w.xa_i)^2
// by plain fixed-step gradient descent (step 1/L with the crude smoothness
// bound L = 1 + 2C ||Xa||_F^2). Slow but independent of the library solver.
// Returns the reached objective value.
inline double referenceSvmObjective(const Matrix& features, const std::vector<double>& y,
                                    double penaltyC, int maxIters = 400000) {
  const Index n = features.rows();
  const Index dim = features.cols() + 1;
  Matrix aug(n, dim);
  aug.leftCols(features.cols()) = features;
  aug.rightCols(1).setOnes();

  const double lipschitz = 1.0 + 2.0 * penaltyC * aug.squaredNorm();
  const double step = 1.0 / lipschitz;
  Vector w = Vector::Zero(dim);
  double previous = std::numeric_limits<double>::infinity();
  int flat = 0;
  for (int it = 0; it < maxIters; ++it) {
    Vector grad = w;
    double objective = 0.5 * w.squaredNorm();
    for (Index i = 0; i < n; ++i) {
      const double margin = 1.0 - y[static_cast<std::size_t>(i)] * aug.row(i).dot(w);
      if (margin > 0.0) {
        objective += penaltyC * margin * margin;
        grad -= (2.0 * penaltyC * margin * y[static_cast<std::size_t>(i)]) * aug.row(i).transpose();
      }
    }
    if (previous - objective <= 1e-15 * std::max(1.0, objective)) {
      if (++flat >= 20) return objective;
    } else {
      flat = 0;
    }
    previous = std::min(previous, objective);
    w -= step * grad;
  }
  return previous;
}

// I0 by Simpson quadrature of the scaled integrand exp(z (cos t - 1)) over
// [0, pi]; exact up to quadrature error for moderate z.
inline double quadratureBesselI0(double z, int intervals = 40000) {
  const double h = kPi / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * std::exp(z * (std::cos(i * h) - 1.0));
  }
  return std::exp(z) * sum * h / (3.0 * kPi);
}

inline Matrix randomMatrix(Index rows, Index cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = scale * normalDraw(rng);
  }
  return m;
}

}  // namespace krf::testing
