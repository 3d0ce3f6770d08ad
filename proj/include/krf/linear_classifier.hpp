#pragma once

#include <cstdint>
#include <vector>

#include "krf/types.hpp"

namespace krf {

/// One-vs-rest linear classifier. Row k of `weights` scores class k on the
/// augmented input [x; 1] (the last column is the bias weight).
struct OvrClassifier {
  Matrix weights;  // numClasses x (featureDim + 1)
  double penaltyC = 1.0;

  int numClasses() const { return static_cast<int>(weights.rows()); }
  Index featureDim() const { return weights.cols() - 1; }
};

/// Scores w_k . [x; 1] for every class.
Vector decisionScores(const OvrClassifier& classifier, const Vector& x);

/// argmax_k w_k . [x; 1], ties broken by lowest class index.
int predict(const OvrClassifier& classifier, const Vector& x);

/// Trains numClasses one-vs-rest L2-regularized squared-hinge problems
///
///   min_w  1/2 ||w||^2 + C sum_i max(0, 1 - l_i w.[x_i; 1])^2
///
/// by Newton-CG on the primal, stopping once the duality gap certifies the
/// primal objective is within `tolerance` relative of the optimum (or after
/// maxIters Newton steps). The solve is deterministic; seed is accepted for
/// interface uniformity. Classes absent from `labels` are trained against
/// all-negative label vectors. Inputs must be finite.
OvrClassifier trainOvr(const Matrix& features, const std::vector<int>& labels,
                       int numClasses, double penaltyC = 1.0, double tolerance = 1e-3,
                       std::uint64_t seed = 0, int maxIters = 200);

}  // namespace krf
