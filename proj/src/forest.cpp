#include "krf/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace krf {

std::vector<Index> baggingIndices(Index n, double ratio, Rng& rng) {
  if (n < 1) throw std::invalid_argument("baggingIndices: need at least one sample");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw std::invalid_argument("baggingIndices: ratio must be in (0, 1]");
  const Index m = std::min<Index>(n, static_cast<Index>(std::ceil(ratio * static_cast<double>(n))));
  return sampleWithoutReplacement(n, m, rng);
}

Forest trainForest(const Matrix& features, const Matrix& targets, const ForestConfig& config) {
  if (features.rows() == 0) throw std::invalid_argument("trainForest: empty dataset");
  if (features.rows() != targets.rows()) throw std::invalid_argument("trainForest: row count mismatch");
  if (config.numTrees < 1) throw std::invalid_argument("trainForest: numTrees must be >= 1");
  if (!(config.baggingRatio > 0.0 && config.baggingRatio <= 1.0)) {
    throw std::invalid_argument("trainForest: baggingRatio must be in (0, 1]");
  }
  if (targets.cols() != config.tree.space.dim()) {
    throw std::invalid_argument("trainForest: target dimension mismatch");
  }

  Forest forest;
  forest.space = config.tree.space;
  forest.featureDim = features.cols();
  forest.config = config;
  forest.trees.resize(static_cast<std::size_t>(config.numTrees));

  // Tree i depends only on its derived seed, so any execution order (or
  // thread schedule) produces the same forest.
  const auto buildTree = [&](int i) {
    const std::uint64_t treeSeed = deriveSeed(config.seed, static_cast<std::uint64_t>(i));
    Rng bagRng = makeRng(treeSeed, 0);
    const std::vector<Index> rows = baggingIndices(features.rows(), config.baggingRatio, bagRng);
    Matrix subFeatures(static_cast<Index>(rows.size()), features.cols());
    Matrix subTargets(static_cast<Index>(rows.size()), targets.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      subFeatures.row(static_cast<Index>(r)) = features.row(rows[r]);
      subTargets.row(static_cast<Index>(r)) = targets.row(rows[r]);
    }
    TreeConfig treeConfig = config.tree;
    treeConfig.seed = deriveSeed(treeSeed, 1);
    forest.trees[static_cast<std::size_t>(i)] = growTree(subFeatures, subTargets, treeConfig);
  };

  const unsigned hardware = std::thread::hardware_concurrency();
  const int workers = static_cast<int>(std::min<unsigned>(hardware == 0 ? 1 : hardware,
                                                          static_cast<unsigned>(config.numTrees)));
  if (workers <= 1) {
    for (int i = 0; i < config.numTrees; ++i) buildTree(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < config.numTrees; i = next.fetch_add(1)) buildTree(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  return forest;
}

ForestPrediction forestPredictDetailed(const Forest& forest, const Vector& x) {
  if (forest.trees.empty()) throw std::invalid_argument("forestPredict: empty forest");
  if (x.size() != forest.featureDim) throw std::invalid_argument("forestPredict: feature dimension mismatch");
  const std::size_t count = forest.trees.size();
  const double inv = 1.0 / static_cast<double>(count);

  ForestPrediction out;
  if (forest.space.isCircular()) {
    std::vector<double> sins(count);
    std::vector<double> coss(count);
    double firstAngle = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double angle = treePredict(forest.trees[i], x)[0];
      if (i == 0) firstAngle = angle;
      sins[i] = std::sin(angle);
      coss[i] = std::cos(angle);
    }
    // Summing in sorted order makes the aggregate independent of tree order.
    std::sort(sins.begin(), sins.end());
    std::sort(coss.begin(), coss.end());
    double sinSum = 0.0;
    double cosSum = 0.0;
    for (double v : sins) sinSum += v;
    for (double v : coss) cosSum += v;
    out.value = Vector::Constant(1, 0.0);
    if (std::hypot(sinSum, cosSum) * inv < kDegenerateResultant) {
      out.value[0] = firstAngle;
      out.degenerate = true;
    } else {
      out.value[0] = normalizeAngle(std::atan2(sinSum, cosSum));
    }
    return out;
  }

  const Index q = forest.space.dim();
  out.value = Vector::Zero(q);
  std::vector<double> column(count);
  Matrix votes(static_cast<Index>(count), q);
  for (std::size_t i = 0; i < count; ++i) {
    votes.row(static_cast<Index>(i)) = treePredict(forest.trees[i], x).transpose();
  }
  for (Index d = 0; d < q; ++d) {
    for (std::size_t i = 0; i < count; ++i) column[i] = votes(static_cast<Index>(i), d);
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    out.value[d] = sum * inv;
  }
  return out;
}

TargetPoint forestPredict(const Forest& forest, const Vector& x) {
  return forestPredictDetailed(forest, x).value;
}

Matrix forestPredictAll(const Forest& forest, const Matrix& features) {
  Matrix out(features.rows(), forest.space.dim());
  for (Index i = 0; i < features.rows(); ++i) {
    out.row(i) = forestPredict(forest, features.row(i).transpose()).transpose();
  }
  return out;
}

}  // namespace krf
