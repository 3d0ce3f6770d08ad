#include "krf/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace krf {

double circularErrorDeg(double a, double b) {
  const double d = normalizeAngle(a - b);
  return radiansToDegrees(std::min(d, kTwoPi - d));
}

std::vector<double> absoluteErrors(const TargetSpace& space, const Matrix& predictions,
                                   const Matrix& truths) {
  if (predictions.rows() != truths.rows() || predictions.cols() != truths.cols()) {
    throw std::invalid_argument("absoluteErrors: shape mismatch");
  }
  if (predictions.cols() != space.dim()) {
    throw std::invalid_argument("absoluteErrors: target dimension mismatch");
  }
  std::vector<double> errors(static_cast<std::size_t>(predictions.rows()));
  for (Index i = 0; i < predictions.rows(); ++i) {
    if (space.isCircular()) {
      errors[static_cast<std::size_t>(i)] = circularErrorDeg(predictions(i, 0), truths(i, 0));
    } else {
      errors[static_cast<std::size_t>(i)] =
          (predictions.row(i) - truths.row(i)).cwiseAbs().mean();
    }
  }
  return errors;
}

EvalReport summarizeErrors(std::vector<double> errors) {
  if (errors.empty()) throw std::invalid_argument("summarizeErrors: no errors");
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  const auto prefixMean = [&](std::size_t count) {
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i) sum += errors[i];
    return sum / static_cast<double>(count);
  };
  EvalReport report;
  report.n = static_cast<Index>(n);
  report.mae = prefixMean(n);
  report.maeP90 = prefixMean((n * 90 + 99) / 100);  // ceil(0.90 n)
  report.maeP95 = prefixMean((n * 95 + 99) / 100);
  return report;
}

EvalReport evaluate(const Forest& forest, const Dataset& dataset) {
  validateDataset(dataset);
  if (dataset.n() == 0) throw std::invalid_argument("evaluate: empty dataset");
  if (dataset.p() != forest.featureDim) throw std::invalid_argument("evaluate: feature dimension mismatch");
  if (!(dataset.space == forest.space)) throw std::invalid_argument("evaluate: target space mismatch");
  return summarizeErrors(absoluteErrors(dataset.space, forestPredictAll(forest, dataset.features),
                                        dataset.targets));
}

}  // namespace krf
