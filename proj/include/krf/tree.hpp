#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "krf/linear_classifier.hpp"
#include "krf/rng.hpp"
#include "krf/target_space.hpp"
#include "krf/types.hpp"

namespace krf {

/// Axis-aligned binary rule: child 0 takes x[dim] < threshold, child 1 the
/// rest.
struct AxisSplit {
  Index dim = 0;
  double threshold = 0.0;
};

/// K-way rule routing by the one-vs-rest classifier's argmax.
struct LinearSplit {
  OvrClassifier classifier;
};

using SplitRule = std::variant<AxisSplit, LinearSplit>;

/// Number of children the rule produces (2 for axis rules).
int fanout(const SplitRule& rule);

/// Child index for a sample.
int route(const SplitRule& rule, const Vector& x);

enum class SplitterKind {
  KrfFixed,     // cluster targets into a fixed number of groups, classify
  KrfAdaptive,  // per-node cluster count chosen by BIC
  Binary,       // exhaustive axis-threshold search
};

struct TreeConfig {
  SplitterKind splitter = SplitterKind::KrfFixed;
  int k = 2;                       // KrfFixed child count, >= 2
  int kMin = 2;                    // KrfAdaptive search range
  int kMax = 40;
  int minSamplesLeaf = 5;          // nodes smaller than this become leaves
  double penaltyC = 1.0;           // classifier penalty
  double svmTolerance = 1e-3;
  double featureRatioGamma = 1.0;  // Binary only: fraction of dims searched
  TargetSpace space = TargetSpace::euclidean(1);
  std::uint64_t seed = 0;
};

struct TreeNode;

struct TreeLeaf {
  TargetPoint estimate;
  Index sampleCount = 0;
  /// Set when the circular mean of the leaf's targets was degenerate and
  /// the estimate fell back to the first sample's target.
  bool degenerateMean = false;
};

struct TreeInternal {
  SplitRule rule;
  std::vector<TreeNode> children;  // size == fanout(rule)
};

struct TreeNode {
  using Leaf = TreeLeaf;
  using Internal = TreeInternal;

  std::variant<TreeLeaf, TreeInternal> value;

  bool isLeaf() const { return std::holds_alternative<TreeLeaf>(value); }
  const TreeLeaf& leaf() const { return std::get<TreeLeaf>(value); }
  const TreeInternal& internal() const { return std::get<TreeInternal>(value); }
};

/// A proposed split: the rule plus, for each child, the node-local row
/// indices the rule routes there. Children always reflect the rule's own
/// routing of every node sample, not the clustering that suggested it.
struct NodeSplit {
  SplitRule rule;
  std::vector<std::vector<Index>> childRows;
};

/// Proposed splitting: cluster the node targets (k-means, or BIC-selected K
/// for KrfAdaptive), train a one-vs-rest classifier on the cluster labels,
/// route every sample through it. No split when fewer than two clusters
/// emerge or when routing leaves any child empty.
std::optional<NodeSplit> splitNodeKrf(const Matrix& features, const Matrix& targets,
                                      const TreeConfig& config, Rng& rng);

/// Baseline splitting: over a gamma-fraction of the dimensions and all
/// midpoints between consecutive distinct values, pick the axis threshold
/// minimizing the summed child loss about the child means.
std::optional<NodeSplit> splitNodeBinary(const Matrix& features, const Matrix& targets,
                                         const TreeConfig& config, Rng& rng);

/// Grows a tree by recursive splitting. A node becomes a leaf when it has
/// fewer than minSamplesLeaf samples, the splitter declines, or the depth
/// safety cap (64) is reached. Leaf estimates are the space mean of the
/// node's targets.
TreeNode growTree(const Matrix& features, const Matrix& targets, const TreeConfig& config);

/// Routes x to a leaf and returns its estimate.
TargetPoint treePredict(const TreeNode& tree, const Vector& x);
const TreeNode::Leaf& treePredictLeaf(const TreeNode& tree, const Vector& x);

}  // namespace krf
