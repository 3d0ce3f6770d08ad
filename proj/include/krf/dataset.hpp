#pragma once

#include <string>
#include <vector>

#include "krf/target_space.hpp"
#include "krf/types.hpp"

namespace krf {

// Feature matrix paired with targets living in one TargetSpace. Circular
// targets are stored in radians; degree conversion happens at file and CLI
// boundaries only. groups is either empty or one label per row.
struct Dataset {
  Matrix features;
  Matrix targets;
  TargetSpace space = TargetSpace::euclidean(1);
  std::vector<std::string> groups;

  Index n() const { return features.rows(); }
  Index p() const { return features.cols(); }
};

// Throws std::invalid_argument on shape mismatches or out-of-range circular
// targets.
void validateDataset(const Dataset& dataset);

Dataset subset(const Dataset& dataset, const std::vector<Index>& rows);

}  // namespace krf
