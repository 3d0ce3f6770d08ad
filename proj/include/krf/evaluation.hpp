#pragma once

#include <vector>

#include "krf/dataset.hpp"
#include "krf/forest.hpp"

namespace krf {

// Trimmed-mean error summary. maeP90 / maeP95 average the smallest
// ceil(0.90 n) / ceil(0.95 n) per-sample errors, so maeP90 <= maeP95 <= mae.
struct EvalReport {
  double mae = 0.0;
  double maeP90 = 0.0;
  double maeP95 = 0.0;
  Index n = 0;
};

// Shorter-arc angular difference between two radian angles, in [0, 180] degrees.
double circularErrorDeg(double a, double b);

// Per-sample absolute error: mean over target dimensions of |truth - prediction|
// (Euclidean), or the shorter-arc difference in degrees (circular).
std::vector<double> absoluteErrors(const TargetSpace& space, const Matrix& predictions,
                                   const Matrix& truths);

EvalReport summarizeErrors(std::vector<double> errors);

EvalReport evaluate(const Forest& forest, const Dataset& dataset);

}  // namespace krf
