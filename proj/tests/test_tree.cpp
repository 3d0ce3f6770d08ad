#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "krf/tree.hpp"
#include "support.hpp"

using namespace krf;
using krf::testing::partLoss;
using krf::testing::randomMatrix;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

Matrix angles(std::initializer_list<double> degrees) {
  Matrix m(static_cast<Index>(degrees.size()), 1);
  Index i = 0;
  for (double d : degrees) m(i++, 0) = normalizeAngle(degreesToRadians(d));
  return m;
}

void forEachLeaf(const TreeNode& node, const std::function<void(const TreeLeaf&)>& fn) {
  if (node.isLeaf()) {
    fn(node.leaf());
    return;
  }
  for (const TreeNode& child : node.internal().children) forEachLeaf(child, fn);
}

// A valid split partitions the node's rows and mirrors its own routing.
void checkSplitInvariants(const NodeSplit& split, const Matrix& features) {
  REQUIRE(static_cast<int>(split.childRows.size()) == fanout(split.rule));
  std::set<Index> seen;
  for (std::size_t c = 0; c < split.childRows.size(); ++c) {
    CHECK_FALSE(split.childRows[c].empty());
    for (Index r : split.childRows[c]) {
      CHECK(seen.insert(r).second);  // disjoint
      CHECK(route(split.rule, Vector(features.row(r).transpose())) == static_cast<int>(c));
    }
  }
  CHECK(seen.size() == static_cast<std::size_t>(features.rows()));
}

// Exhaustive best axis split: all dimensions, all midpoints between
// consecutive distinct values, strict improvement keeps the earliest
// candidate in (dimension, threshold) order.
struct OracleSplit {
  Index dim = 0;
  double threshold = 0.0;
  double loss = std::numeric_limits<double>::infinity();
  bool found = false;
  int nearOptimal = 0;  // candidates within 1e-9 of the best (ties)
};

OracleSplit binaryOracle(const TargetSpace& space, const Matrix& features,
                         const Matrix& targets) {
  OracleSplit best;
  std::vector<double> losses;
  for (Index dim = 0; dim < features.cols(); ++dim) {
    std::vector<double> values(static_cast<std::size_t>(features.rows()));
    for (Index i = 0; i < features.rows(); ++i) {
      values[static_cast<std::size_t>(i)] = features(i, dim);
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t v = 0; v + 1 < values.size(); ++v) {
      const double threshold = values[v] + 0.5 * (values[v + 1] - values[v]);
      if (!(threshold > values[v])) continue;  // midpoint collapsed onto the boundary
      std::vector<Index> left, right;
      for (Index i = 0; i < features.rows(); ++i) {
        (features(i, dim) < threshold ? left : right).push_back(i);
      }
      if (left.empty() || right.empty()) continue;
      const double loss = partLoss(space, targets, left) + partLoss(space, targets, right);
      losses.push_back(loss);
      if (loss < best.loss) {
        best.dim = dim;
        best.threshold = threshold;
        best.loss = loss;
        best.found = true;
      }
    }
  }
  for (double l : losses) {
    if (l <= best.loss + 1e-9) ++best.nearOptimal;
  }
  return best;
}

TreeConfig binaryConfig(const TargetSpace& space, double gamma = 1.0) {
  TreeConfig config;
  config.splitter = SplitterKind::Binary;
  config.featureRatioGamma = gamma;
  config.space = space;
  return config;
}

double treeTrainLoss(const TreeNode& tree, const TargetSpace& space, const Matrix& features,
                     const Matrix& targets) {
  double total = 0.0;
  for (Index i = 0; i < features.rows(); ++i) {
    total += loss(space, TargetPoint(targets.row(i)),
                  treePredict(tree, Vector(features.row(i).transpose())));
  }
  return total;
}

}  // namespace

TEST_CASE("axis rules route on a threshold") {
  const SplitRule rule = AxisSplit{1, 5.0};
  CHECK(fanout(rule) == 2);
  Vector x(3);
  x << 100.0, 4.9, -100.0;
  CHECK(route(rule, x) == 0);
  x[1] = 5.0;  // boundary goes right: the rule is x[dim] < threshold
  CHECK(route(rule, x) == 1);
  x[1] = 7.0;
  CHECK(route(rule, x) == 1);
}

TEST_CASE("linear rules route by classifier argmax") {
  OvrClassifier clf;
  clf.weights = Matrix(3, 2);
  clf.weights << 1.0, 0.0, -1.0, 0.0, 0.0, 0.5;
  const SplitRule rule = LinearSplit{clf};
  CHECK(fanout(rule) == 3);
  Vector x(1);
  x << 2.0;
  CHECK(route(rule, x) == 0);
  x << -2.0;
  CHECK(route(rule, x) == 1);
  x << 0.1;  // scores 0.1, -0.1, 0.5
  CHECK(route(rule, x) == 2);
}

TEST_CASE("cluster-guided split separates two target pairs") {
  // targets form two tight pairs; features mirror them, so the learned
  // classifier recovers the clustering exactly
  const Matrix features = column({0.0, 1.0, 10.0, 11.0});
  const Matrix targets = column({0.0, 1.0, 10.0, 11.0});
  TreeConfig config;
  config.splitter = SplitterKind::KrfFixed;
  config.k = 2;
  config.space = TargetSpace::euclidean(1);
  Rng rng = makeRng(1, 0);
  const auto split = splitNodeKrf(features, targets, config, rng);
  REQUIRE(split.has_value());
  REQUIRE(std::holds_alternative<LinearSplit>(split->rule));
  checkSplitInvariants(*split, features);
  REQUIRE(split->childRows.size() == 2);
  // the two pairs end up together, whichever child index each gets
  std::vector<std::vector<Index>> sorted = split->childRows;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == std::vector<Index>{0, 1});
  CHECK(sorted[1] == std::vector<Index>{2, 3});
}

TEST_CASE("cluster-guided split declines degenerate nodes") {
  TreeConfig config;
  config.splitter = SplitterKind::KrfFixed;
  config.k = 2;
  config.space = TargetSpace::euclidean(1);
  Rng rng = makeRng(2, 0);

  SUBCASE("identical targets leave a single cluster") {
    const Matrix features = column({0.0, 1.0, 2.0, 3.0});
    const Matrix targets = column({5.0, 5.0, 5.0, 5.0});
    CHECK_FALSE(splitNodeKrf(features, targets, config, rng).has_value());
  }

  SUBCASE("identical features cannot separate distinct clusters") {
    // the classifier scores every sample identically, so one child takes
    // everything and the split is rejected
    const Matrix features = column({7.0, 7.0, 7.0, 7.0});
    const Matrix targets = column({0.0, 0.0, 10.0, 10.0});
    CHECK_FALSE(splitNodeKrf(features, targets, config, rng).has_value());
  }
}

TEST_CASE("cluster-guided children always mirror classifier routing") {
  // even when the classifier disagrees with the clustering, childRows must
  // follow the classifier
  Rng dataRng = makeRng(3, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = 20 + static_cast<Index>(uniformIndex(dataRng, 20));
    const Matrix features = randomMatrix(n, 3, dataRng, 2.0);
    const Matrix targets = randomMatrix(n, 2, dataRng, 5.0);
    TreeConfig config;
    config.splitter = SplitterKind::KrfFixed;
    config.k = 3;
    config.space = TargetSpace::euclidean(2);
    Rng rng = makeRng(100 + static_cast<std::uint64_t>(trial), 0);
    const auto split = splitNodeKrf(features, targets, config, rng);
    if (split) checkSplitInvariants(*split, features);
  }
}

TEST_CASE("adaptive split picks the child count by information criterion") {
  // three tight target blobs with matching features: fanout should be 3
  Rng rng = makeRng(4, 0);
  Matrix features(45, 2);
  Matrix targets(45, 1);
  for (Index i = 0; i < 45; ++i) {
    const double center = 50.0 * static_cast<double>(i % 3);
    targets(i, 0) = center + 0.5 * normalDraw(rng);
    features(i, 0) = center + 0.5 * normalDraw(rng);
    features(i, 1) = normalDraw(rng);
  }
  TreeConfig config;
  config.splitter = SplitterKind::KrfAdaptive;
  config.kMin = 2;
  config.kMax = 8;
  config.space = TargetSpace::euclidean(1);
  Rng splitRng = makeRng(5, 0);
  const auto split = splitNodeKrf(features, targets, config, splitRng);
  REQUIRE(split.has_value());
  CHECK(fanout(split->rule) == 3);
  checkSplitInvariants(*split, features);
}

TEST_CASE("binary split matches the exhaustive oracle") {
  Rng rng = makeRng(6, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const bool circular = trial % 2 == 1;
    const auto space = circular ? TargetSpace::circular() : TargetSpace::euclidean(2);
    const Index n = 6 + static_cast<Index>(uniformIndex(rng, 7));  // 6..12
    const Index p = 1 + static_cast<Index>(uniformIndex(rng, 3));  // 1..3
    const Matrix features = randomMatrix(n, p, rng, 2.0);
    Matrix targets(n, space.dim());
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < space.dim(); ++j) {
        targets(i, j) = circular ? kTwoPi * uniformReal(rng) : 3.0 * normalDraw(rng);
      }
    }
    const OracleSplit oracle = binaryOracle(space, features, targets);
    Rng splitRng = makeRng(50 + static_cast<std::uint64_t>(trial), 0);
    const auto split = splitNodeBinary(features, targets, binaryConfig(space), splitRng);
    CAPTURE(trial);
    REQUIRE(split.has_value() == oracle.found);
    if (!oracle.found) continue;
    const auto& axis = std::get<AxisSplit>(split->rule);
    if (oracle.nearOptimal == 1) {
      // unique optimum: the exact candidate must be chosen
      CHECK(axis.dim == oracle.dim);
      CHECK(axis.threshold == oracle.threshold);
    }
    // in all cases the achieved loss must match the exhaustive optimum
    const double achieved = partLoss(space, targets, split->childRows[0]) +
                            partLoss(space, targets, split->childRows[1]);
    CHECK(achieved <= oracle.loss + 1e-9);
    checkSplitInvariants(*split, features);
  }
}

TEST_CASE("binary split tie-breaks toward the first candidate") {
  const auto space = TargetSpace::euclidean(1);
  Rng rng = makeRng(7, 0);

  SUBCASE("identical columns: the lower dimension wins") {
    Matrix features(4, 2);
    features << 0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0;
    const Matrix targets = column({0.0, 0.0, 9.0, 9.0});
    const auto split = splitNodeBinary(features, targets, binaryConfig(space), rng);
    REQUIRE(split.has_value());
    CHECK(std::get<AxisSplit>(split->rule).dim == 0);
    CHECK(std::get<AxisSplit>(split->rule).threshold == doctest::Approx(1.5));
  }

  SUBCASE("constant targets: every split ties, the first threshold wins") {
    const Matrix features = column({0.0, 1.0, 2.0, 3.0});
    const Matrix targets = column({5.0, 5.0, 5.0, 5.0});
    const auto split = splitNodeBinary(features, targets, binaryConfig(space), rng);
    REQUIRE(split.has_value());
    CHECK(std::get<AxisSplit>(split->rule).threshold == doctest::Approx(0.5));
  }
}

TEST_CASE("binary split declines constant features") {
  const auto space = TargetSpace::euclidean(1);
  Rng rng = makeRng(8, 0);
  const Matrix features = column({2.0, 2.0, 2.0});
  const Matrix targets = column({1.0, 5.0, 9.0});
  CHECK_FALSE(splitNodeBinary(features, targets, binaryConfig(space), rng).has_value());
}

TEST_CASE("binary split samples a gamma fraction of dimensions") {
  // gamma = 0.2 of p = 5 considers exactly one dimension; the chosen axis
  // must still be a valid midpoint of that dimension
  Rng dataRng = makeRng(9, 0);
  const Matrix features = randomMatrix(12, 5, dataRng);
  const Matrix targets = randomMatrix(12, 1, dataRng, 3.0);
  const auto space = TargetSpace::euclidean(1);

  Rng rng = makeRng(10, 0);
  const auto split = splitNodeBinary(features, targets, binaryConfig(space, 0.2), rng);
  REQUIRE(split.has_value());
  const auto& axis = std::get<AxisSplit>(split->rule);
  CHECK(axis.dim >= 0);
  CHECK(axis.dim < 5);
  // threshold strictly inside the value range of its dimension
  CHECK(axis.threshold > features.col(axis.dim).minCoeff());
  CHECK(axis.threshold <= features.col(axis.dim).maxCoeff());

  // same rng stream, same choice
  Rng rng2 = makeRng(10, 0);
  const auto again = splitNodeBinary(features, targets, binaryConfig(space, 0.2), rng2);
  REQUIRE(again.has_value());
  CHECK(std::get<AxisSplit>(again->rule).dim == axis.dim);
  CHECK(std::get<AxisSplit>(again->rule).threshold == axis.threshold);
}

TEST_CASE("small nodes become leaves") {
  const Matrix features = column({1.0, 2.0, 3.0});
  const Matrix targets = column({4.0, 5.0, 6.0});
  TreeConfig config;
  config.space = TargetSpace::euclidean(1);
  config.minSamplesLeaf = 5;
  const TreeNode tree = growTree(features, targets, config);
  REQUIRE(tree.isLeaf());
  CHECK(tree.leaf().sampleCount == 3);
  CHECK(tree.leaf().estimate[0] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_FALSE(tree.leaf().degenerateMean);
}

TEST_CASE("a grown tree partitions the training data") {
  Rng rng = makeRng(11, 0);
  Matrix features(60, 2);
  Matrix targets(60, 1);
  for (Index i = 0; i < 60; ++i) {
    const double center = 30.0 * static_cast<double>(i % 2);
    features(i, 0) = center + normalDraw(rng);
    features(i, 1) = normalDraw(rng);
    targets(i, 0) = center + 0.1 * normalDraw(rng);
  }
  for (SplitterKind splitter :
       {SplitterKind::KrfFixed, SplitterKind::KrfAdaptive, SplitterKind::Binary}) {
    TreeConfig config;
    config.splitter = splitter;
    config.space = TargetSpace::euclidean(1);
    config.seed = 77;
    const TreeNode tree = growTree(features, targets, config);
    CHECK_FALSE(tree.isLeaf());  // the blob structure is easily split

    Index totalSamples = 0;
    Index leaves = 0;
    forEachLeaf(tree, [&](const TreeLeaf& leaf) {
      totalSamples += leaf.sampleCount;
      ++leaves;
      CHECK(leaf.sampleCount >= 1);
    });
    CHECK(totalSamples == 60);
    CHECK(leaves >= 2);

    // fitting strictly improves on the single-leaf fit for this data
    const double fitted = treeTrainLoss(tree, config.space, features, targets);
    std::vector<Index> all(60);
    for (Index i = 0; i < 60; ++i) all[static_cast<std::size_t>(i)] = i;
    CHECK(fitted < partLoss(config.space, targets, all));
  }
}

TEST_CASE("treePredict returns the estimate of the routed leaf") {
  Rng rng = makeRng(12, 0);
  const Matrix features = randomMatrix(40, 3, rng, 2.0);
  const Matrix targets = randomMatrix(40, 2, rng, 4.0);
  TreeConfig config;
  config.splitter = SplitterKind::KrfFixed;
  config.k = 2;
  config.space = TargetSpace::euclidean(2);
  config.seed = 13;
  const TreeNode tree = growTree(features, targets, config);
  for (int t = 0; t < 100; ++t) {
    const Vector x = randomMatrix(3, 1, rng, 2.0);
    const TreeLeaf& leaf = treePredictLeaf(tree, x);
    CHECK(treePredict(tree, x) == leaf.estimate);  // same object, bitwise
  }
}

TEST_CASE("growth is deterministic in the seed") {
  Rng rng = makeRng(14, 0);
  const Matrix features = randomMatrix(50, 2, rng);
  const Matrix targets = randomMatrix(50, 1, rng, 5.0);
  TreeConfig config;
  config.splitter = SplitterKind::KrfFixed;
  config.k = 3;
  config.space = TargetSpace::euclidean(1);
  config.seed = 99;
  const TreeNode a = growTree(features, targets, config);
  const TreeNode b = growTree(features, targets, config);
  for (int t = 0; t < 50; ++t) {
    const Vector x = randomMatrix(2, 1, rng);
    CHECK(treePredict(a, x) == treePredict(b, x));
  }
}

TEST_CASE("degenerate circular leaf falls back to the first sample") {
  const Matrix features = column({0.0, 1.0});
  const Matrix targets = angles({0.0, 180.0});
  TreeConfig config;
  config.space = TargetSpace::circular();
  config.minSamplesLeaf = 5;
  const TreeNode tree = growTree(features, targets, config);
  REQUIRE(tree.isLeaf());
  CHECK(tree.leaf().degenerateMean);
  CHECK(tree.leaf().estimate[0] == doctest::Approx(0.0));
}

TEST_CASE("growTree rejects malformed configurations") {
  const Matrix features = column({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  const Matrix targets = column({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  TreeConfig config;
  config.space = TargetSpace::euclidean(1);

  TreeConfig bad = config;
  bad.k = 1;
  CHECK_THROWS_AS(growTree(features, targets, bad), std::invalid_argument);

  bad = config;
  bad.minSamplesLeaf = 0;
  CHECK_THROWS_AS(growTree(features, targets, bad), std::invalid_argument);

  bad = config;
  bad.splitter = SplitterKind::Binary;
  bad.featureRatioGamma = 0.0;
  CHECK_THROWS_AS(growTree(features, targets, bad), std::invalid_argument);
  bad.featureRatioGamma = 1.5;
  CHECK_THROWS_AS(growTree(features, targets, bad), std::invalid_argument);

  bad = config;
  bad.kMin = 5;
  bad.kMax = 3;
  bad.splitter = SplitterKind::KrfAdaptive;
  CHECK_THROWS_AS(growTree(features, targets, bad), std::invalid_argument);

  // shape mismatches
  CHECK_THROWS_AS(growTree(features, column({1.0, 2.0}), config), std::invalid_argument);
  CHECK_THROWS_AS(growTree(Matrix(0, 1), Matrix(0, 1), config), std::invalid_argument);
  Matrix wide(6, 2);
  wide.setZero();
  CHECK_THROWS_AS(growTree(features, wide, config), std::invalid_argument);
}
