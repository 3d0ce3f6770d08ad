#include "krf/linear_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krf {

namespace {

// Newton-CG on the primal objective for one binary problem
//
//   J(w) = 1/2 ||w||^2 + C sum_i max(0, 1 - y_i xa_i . w)^2,
//
// where xa are the columns of `dataT` (augmented samples). J is piecewise
// quadratic with generalized Hessian I + 2C Xa_A^T Xa_A over the active set
// A = {i : margin > 0}; each step solves the Newton system by conjugate
// gradients and backtracks on the Armijo condition. Progress is certified
// through the dual of the same problem: a(w)_i = 2C max(0, margin_i) is
// dual-feasible, and iteration stops when J(w) - D(a(w)) <= tolerance *
// D(a(w)), which gives J(w) <= (1 + tolerance) J*. Unlike coordinate
// methods, the Newton direction is insensitive to feature scaling, which
// node data here (raw, unstandardized targets-as-features) can make severe.
Vector solveBinary(const Matrix& dataT, const Vector& labels, double penaltyC,
                   double tolerance, int maxIters) {
  const Index dim = dataT.rows();
  const Index n = dataT.cols();
  const double c2 = 2.0 * penaltyC;

  Vector w = Vector::Zero(dim);
  Vector margins = Vector::Ones(n);  // 1 - y_i xa_i . w at w = 0

  const auto objective = [&](const Vector& wv, const Vector& m) {
    double loss = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (m[i] > 0.0) loss += m[i] * m[i];
    }
    return 0.5 * wv.squaredNorm() + penaltyC * loss;
  };

  for (int iter = 0; iter < maxIters; ++iter) {
    // Duality-gap stop. w(a) = sum_i a_i y_i xa_i generally differs from w,
    // so the dual value is evaluated at its own vector.
    Vector active = margins.cwiseMax(0.0);
    const double primal = 0.5 * w.squaredNorm() + penaltyC * active.squaredNorm();
    Vector wa = dataT * (c2 * active.cwiseProduct(labels));
    const double dual = c2 * active.sum() - 0.5 * wa.squaredNorm() -
                        (c2 * active).squaredNorm() / (4.0 * penaltyC);
    if (dual > 0.0 && primal - dual <= tolerance * dual) break;

    Vector grad = w;
    for (Index i = 0; i < n; ++i) {
      if (margins[i] > 0.0) grad -= (c2 * margins[i] * labels[i]) * dataT.col(i);
    }
    if (grad.squaredNorm() <= 1e-24 * std::max(1.0, w.squaredNorm())) break;

    // CG on (I + 2C Xa_A Xa_A^T) d = -grad with the active set frozen.
    Vector d = Vector::Zero(dim);
    Vector residual = -grad;
    Vector direction = residual;
    double rr = residual.squaredNorm();
    const double cgTarget = 0.01 * rr;  // forcing factor 0.1 on the norm
    for (Index cg = 0; cg < dim + 2 && rr > cgTarget; ++cg) {
      Vector hv = direction;
      for (Index i = 0; i < n; ++i) {
        if (margins[i] > 0.0) hv += (c2 * dataT.col(i).dot(direction)) * dataT.col(i);
      }
      const double alpha = rr / direction.dot(hv);
      d += alpha * direction;
      residual -= alpha * hv;
      const double rrNext = residual.squaredNorm();
      direction = residual + (rrNext / rr) * direction;
      rr = rrNext;
    }

    const double slope = grad.dot(d);
    if (slope >= 0.0) break;  // CG failed to produce descent; w is at a kink
    const double before = objective(w, margins);
    Vector marginStep = dataT.transpose() * d;
    marginStep = -labels.cwiseProduct(marginStep);  // margin change per unit step
    double step = 1.0;
    bool accepted = false;
    for (int half = 0; half < 40; ++half) {
      const Vector trialW = w + step * d;
      const Vector trialMargins = margins + step * marginStep;
      if (objective(trialW, trialMargins) <= before + 1e-4 * step * slope) {
        w = trialW;
        margins = trialMargins;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return w;
}

}  // namespace

Vector decisionScores(const OvrClassifier& classifier, const Vector& x) {
  if (x.size() != classifier.featureDim()) {
    throw std::invalid_argument("decisionScores: feature dimension mismatch");
  }
  Vector augmented(x.size() + 1);
  augmented << x, 1.0;
  return classifier.weights * augmented;
}

int predict(const OvrClassifier& classifier, const Vector& x) {
  const Vector scores = decisionScores(classifier, x);
  int best = 0;
  for (int k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

OvrClassifier trainOvr(const Matrix& features, const std::vector<int>& labels,
                       int numClasses, double penaltyC, double tolerance,
                       std::uint64_t seed, int maxIters) {
  (void)seed;
  const Index n = features.rows();
  if (n < 1) throw std::invalid_argument("trainOvr: empty training set");
  if (static_cast<Index>(labels.size()) != n) throw std::invalid_argument("trainOvr: label count mismatch");
  if (numClasses < 2) throw std::invalid_argument("trainOvr: need at least 2 classes");
  if (penaltyC <= 0.0) throw std::invalid_argument("trainOvr: penalty must be positive");
  if (!features.allFinite()) throw std::invalid_argument("trainOvr: non-finite feature values");
  for (int label : labels) {
    if (label < 0 || label >= numClasses) throw std::invalid_argument("trainOvr: label out of range");
  }

  // Augmented samples as columns for contiguous access in the inner loops.
  Matrix dataT(features.cols() + 1, n);
  dataT.topRows(features.cols()) = features.transpose();
  dataT.bottomRows(1).setOnes();

  OvrClassifier classifier;
  classifier.penaltyC = penaltyC;
  classifier.weights.resize(numClasses, dataT.rows());
  Vector binaryLabels(n);
  for (int k = 0; k < numClasses; ++k) {
    for (Index i = 0; i < n; ++i) {
      binaryLabels[i] = labels[static_cast<std::size_t>(i)] == k ? 1.0 : -1.0;
    }
    classifier.weights.row(k) =
        solveBinary(dataT, binaryLabels, penaltyC, tolerance, maxIters).transpose();
  }
  return classifier;
}

}  // namespace krf
