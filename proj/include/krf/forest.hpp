#pragma once

#include <cstdint>
#include <vector>

#include "krf/tree.hpp"

namespace krf {

struct ForestConfig {
  int numTrees = 20;
  double baggingRatio = 1.0;  // fraction of samples given to each tree, in (0, 1]
  TreeConfig tree;
  std::uint64_t seed = 0;
};

struct Forest {
  std::vector<TreeNode> trees;
  TargetSpace space = TargetSpace::euclidean(1);
  Index featureDim = 0;
  ForestConfig config;
};

struct ForestPrediction {
  TargetPoint value;
  // Circular tree outputs cancelled each other out; value copies the first tree.
  bool degenerate = false;
};

// ceil(ratio * n) indices drawn uniformly without replacement, sorted ascending.
std::vector<Index> baggingIndices(Index n, double ratio, Rng& rng);

Forest trainForest(const Matrix& features, const Matrix& targets, const ForestConfig& config);

ForestPrediction forestPredictDetailed(const Forest& forest, const Vector& x);
TargetPoint forestPredict(const Forest& forest, const Vector& x);

// One prediction per row of features, stacked N x q.
Matrix forestPredictAll(const Forest& forest, const Matrix& features);

}  // namespace krf
