#include "krf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "krf/clustering.hpp"
#include "krf/model_selection.hpp"

namespace krf {

namespace {

constexpr int kMaxDepth = 64;

Matrix gatherRows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

void validateConfig(const TreeConfig& config) {
  if (config.minSamplesLeaf < 1) throw std::invalid_argument("tree: minSamplesLeaf must be >= 1");
  if (config.penaltyC <= 0.0) throw std::invalid_argument("tree: penaltyC must be positive");
  if (config.splitter == SplitterKind::KrfFixed && config.k < 2) {
    throw std::invalid_argument("tree: fixed splitter needs k >= 2");
  }
  if (config.splitter == SplitterKind::KrfAdaptive && !(2 <= config.kMin && config.kMin <= config.kMax)) {
    throw std::invalid_argument("tree: adaptive splitter needs 2 <= kMin <= kMax");
  }
  if (config.splitter == SplitterKind::Binary &&
      !(config.featureRatioGamma > 0.0 && config.featureRatioGamma <= 1.0)) {
    throw std::invalid_argument("tree: featureRatioGamma must be in (0, 1]");
  }
}

TreeNode makeLeaf(const TargetSpace& space, const Matrix& targets) {
  TreeNode node;
  TreeNode::Leaf leaf;
  leaf.sampleCount = targets.rows();
  auto m = tryMean(space, targets);
  if (m) {
    leaf.estimate = *std::move(m);
  } else {
    leaf.estimate = targets.row(0).transpose();
    leaf.degenerateMean = true;
  }
  node.value = std::move(leaf);
  return node;
}

TreeNode growNode(const Matrix& features, const Matrix& targets, const TreeConfig& config,
                  std::uint64_t nodeSeed, int depth) {
  if (targets.rows() < config.minSamplesLeaf || depth >= kMaxDepth) {
    return makeLeaf(config.space, targets);
  }
  Rng rng = makeRng(nodeSeed, 0);
  const std::optional<NodeSplit> split = config.splitter == SplitterKind::Binary
                                             ? splitNodeBinary(features, targets, config, rng)
                                             : splitNodeKrf(features, targets, config, rng);
  if (!split) return makeLeaf(config.space, targets);

  TreeNode::Internal internal;
  internal.rule = split->rule;
  internal.children.reserve(split->childRows.size());
  for (std::size_t c = 0; c < split->childRows.size(); ++c) {
    internal.children.push_back(growNode(gatherRows(features, split->childRows[c]),
                                         gatherRows(targets, split->childRows[c]), config,
                                         deriveSeed(nodeSeed, c + 1), depth + 1));
  }
  TreeNode node;
  node.value = std::move(internal);
  return node;
}

}  // namespace

int fanout(const SplitRule& rule) {
  if (const auto* linear = std::get_if<LinearSplit>(&rule)) {
    return linear->classifier.numClasses();
  }
  return 2;
}

int route(const SplitRule& rule, const Vector& x) {
  if (const auto* linear = std::get_if<LinearSplit>(&rule)) {
    return predict(linear->classifier, x);
  }
  const auto& axis = std::get<AxisSplit>(rule);
  if (axis.dim >= x.size()) throw std::invalid_argument("route: feature dimension mismatch");
  return x[axis.dim] < axis.threshold ? 0 : 1;
}

std::optional<NodeSplit> splitNodeKrf(const Matrix& features, const Matrix& targets,
                                      const TreeConfig& config, Rng& rng) {
  Clustering clustering;
  if (config.splitter == SplitterKind::KrfAdaptive) {
    // One clustering draw per (node, K): the per-node randomness is part of
    // the forest's diversity, so the sweep must not retry its way to the
    // global optimum here.
    auto selected = selectK(config.space, targets, config.kMin, config.kMax, rng(),
                            /*restarts=*/1);
    if (!selected) return std::nullopt;
    clustering = std::move(selected->clustering);
  } else {
    clustering = kmeans(config.space, targets, config.k, rng());
  }
  if (clustering.kEffective < 2) return std::nullopt;

  OvrClassifier classifier =
      trainOvr(features, clustering.assignments, clustering.kEffective, config.penaltyC,
               config.svmTolerance, rng());

  NodeSplit split;
  split.childRows.assign(static_cast<std::size_t>(clustering.kEffective), {});
  for (Index i = 0; i < features.rows(); ++i) {
    const int child = predict(classifier, features.row(i).transpose());
    split.childRows[static_cast<std::size_t>(child)].push_back(i);
  }
  for (const auto& rows : split.childRows) {
    if (rows.empty()) return std::nullopt;
  }
  split.rule = LinearSplit{std::move(classifier)};
  return split;
}

std::optional<NodeSplit> splitNodeBinary(const Matrix& features, const Matrix& targets,
                                         const TreeConfig& config, Rng& rng) {
  const Index n = features.rows();
  const Index p = features.cols();
  const Index dims = std::clamp<Index>(
      static_cast<Index>(std::ceil(config.featureRatioGamma * static_cast<double>(p))), 1, p);
  const std::vector<Index> candidateDims = sampleWithoutReplacement(p, dims, rng);
  const bool circular = config.space.isCircular();
  const Index q = targets.cols();

  bool found = false;
  double bestLoss = 0.0;
  AxisSplit best{0, 0.0};

  // Prefix sufficient statistics over each sorted order. For Euclidean targets
  // the child loss about the child mean is sum||t||^2 - ||sum t||^2/n; for
  // circular targets it is n - |sum of unit vectors|.
  Vector totalVec = Vector::Zero(circular ? 2 : q);
  double totalSq = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (circular) {
      totalVec[0] += std::sin(targets(i, 0));
      totalVec[1] += std::cos(targets(i, 0));
    } else {
      totalVec += targets.row(i).transpose();
      totalSq += targets.row(i).squaredNorm();
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index dim : candidateDims) {
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      return features(a, dim) < features(b, dim);
    });

    Vector sumVec = Vector::Zero(circular ? 2 : q);
    double sumSq = 0.0;
    for (Index j = 0; j + 1 < n; ++j) {
      const Index row = order[static_cast<std::size_t>(j)];
      if (circular) {
        sumVec[0] += std::sin(targets(row, 0));
        sumVec[1] += std::cos(targets(row, 0));
      } else {
        sumVec += targets.row(row).transpose();
        sumSq += targets.row(row).squaredNorm();
      }
      const double lo = features(row, dim);
      const double hi = features(order[static_cast<std::size_t>(j + 1)], dim);
      if (lo == hi) continue;
      const double threshold = lo + 0.5 * (hi - lo);
      if (!(threshold > lo && threshold <= hi)) continue;  // midpoint rounded onto lo

      const double nLeft = static_cast<double>(j + 1);
      const double nRight = static_cast<double>(n - j - 1);
      double lossHere;
      if (circular) {
        lossHere = nLeft - sumVec.norm() + nRight - (totalVec - sumVec).norm();
      } else {
        const double left = std::max(0.0, sumSq - sumVec.squaredNorm() / nLeft);
        const double right =
            std::max(0.0, (totalSq - sumSq) - (totalVec - sumVec).squaredNorm() / nRight);
        lossHere = left + right;
      }
      if (!found || lossHere < bestLoss) {
        found = true;
        bestLoss = lossHere;
        best = AxisSplit{dim, threshold};
      }
    }
  }
  if (!found) return std::nullopt;

  NodeSplit split;
  split.childRows.assign(2, {});
  for (Index i = 0; i < n; ++i) {
    split.childRows[features(i, best.dim) < best.threshold ? 0 : 1].push_back(i);
  }
  split.rule = best;
  return split;
}

TreeNode growTree(const Matrix& features, const Matrix& targets, const TreeConfig& config) {
  if (features.rows() == 0) throw std::invalid_argument("growTree: empty dataset");
  if (features.rows() != targets.rows()) throw std::invalid_argument("growTree: row count mismatch");
  if (targets.cols() != config.space.dim()) throw std::invalid_argument("growTree: target dimension mismatch");
  validateConfig(config);
  return growNode(features, targets, config, deriveSeed(config.seed, 0), 0);
}

const TreeNode::Leaf& treePredictLeaf(const TreeNode& tree, const Vector& x) {
  const TreeNode* node = &tree;
  while (!node->isLeaf()) {
    const auto& internal = node->internal();
    node = &internal.children[static_cast<std::size_t>(route(internal.rule, x))];
  }
  return node->leaf();
}

TargetPoint treePredict(const TreeNode& tree, const Vector& x) {
  return treePredictLeaf(tree, x).estimate;
}

}  // namespace krf
