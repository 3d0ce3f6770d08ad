#include "krf/dataset.hpp"

#include <stdexcept>

namespace krf {

void validateDataset(const Dataset& dataset) {
  if (dataset.features.rows() != dataset.targets.rows()) {
    throw std::invalid_argument("dataset: feature/target row count mismatch");
  }
  if (dataset.targets.cols() != dataset.space.dim()) {
    throw std::invalid_argument("dataset: target dimension does not match space");
  }
  if (!dataset.groups.empty() &&
      static_cast<Index>(dataset.groups.size()) != dataset.features.rows()) {
    throw std::invalid_argument("dataset: group labels must cover every row");
  }
  if (!dataset.features.allFinite() || !dataset.targets.allFinite()) {
    throw std::invalid_argument("dataset: non-finite value");
  }
  if (dataset.space.isCircular()) {
    for (Index i = 0; i < dataset.targets.rows(); ++i) {
      const double t = dataset.targets(i, 0);
      if (!(t >= 0.0 && t < 2.0 * kPi)) {
        throw std::invalid_argument("dataset: circular target outside [0, 2pi)");
      }
    }
  }
}

Dataset subset(const Dataset& dataset, const std::vector<Index>& rows) {
  Dataset out;
  out.space = dataset.space;
  out.features.resize(static_cast<Index>(rows.size()), dataset.features.cols());
  out.targets.resize(static_cast<Index>(rows.size()), dataset.targets.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Index>(i)) = dataset.features.row(rows[i]);
    out.targets.row(static_cast<Index>(i)) = dataset.targets.row(rows[i]);
  }
  if (!dataset.groups.empty()) {
    out.groups.reserve(rows.size());
    for (Index r : rows) out.groups.push_back(dataset.groups[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace krf
