#include "krf/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "krf/bessel.hpp"
#include "krf/rng.hpp"

namespace krf {

namespace {

std::vector<Index> clusterCounts(const Clustering& clustering) {
  std::vector<Index> counts(static_cast<std::size_t>(clustering.kEffective), 0);
  for (int a : clustering.assignments) ++counts[static_cast<std::size_t>(a)];
  return counts;
}

double countEntropyTerm(const std::vector<Index>& counts, Index n) {
  double sum = 0.0;
  for (Index c : counts) sum += static_cast<double>(c) * std::log(static_cast<double>(c));
  return sum - static_cast<double>(n) * std::log(static_cast<double>(n));
}

void checkClustering(const Matrix& targets, const Clustering& clustering) {
  if (static_cast<Index>(clustering.assignments.size()) != targets.rows() ||
      clustering.kEffective < 1 || clustering.centroids.rows() != clustering.kEffective ||
      clustering.centroids.cols() != targets.cols()) {
    throw std::invalid_argument("bic: clustering does not match targets");
  }
}

}  // namespace

double estimateKappa(double rBar) {
  if (rBar < 0.0) throw std::invalid_argument("estimateKappa: resultant must be nonnegative");
  if (rBar >= 1.0 - 1e-12) return kKappaMax;
  return 1.0 / (2.0 * (1.0 - rBar));
}

std::optional<BicScore> euclideanBic(const Matrix& targets, const Clustering& clustering) {
  checkClustering(targets, clustering);
  const Index n = targets.rows();
  const int k = clustering.kEffective;
  const auto q = static_cast<double>(targets.cols());
  if (n <= k) return std::nullopt;

  double sse = 0.0;
  for (Index i = 0; i < n; ++i) {
    sse += (targets.row(i) - clustering.centroids.row(clustering.assignments[static_cast<std::size_t>(i)]))
               .squaredNorm();
  }
  const double sigma2 = sse / static_cast<double>(n - k);
  if (sigma2 <= 0.0) return std::nullopt;

  const double nd = static_cast<double>(n);
  BicScore score;
  score.k = k;
  score.logLikelihood = -0.5 * q * nd * std::log(kTwoPi * sigma2) -
                        0.5 * static_cast<double>(n - k) +
                        countEntropyTerm(clusterCounts(clustering), n);
  score.penalty = (k - 1 + q * k + 1) * std::log(nd);
  score.bic = -2.0 * score.logLikelihood + score.penalty;
  return score;
}

BicScore circularBic(const Matrix& targets, const Clustering& clustering) {
  checkClustering(targets, clustering);
  if (targets.cols() != 1) throw std::invalid_argument("circularBic: expects one angle per row");
  const Index n = targets.rows();
  const int k = clustering.kEffective;
  const double nd = static_cast<double>(n);

  double sumCos = 0.0;
  for (Index i = 0; i < n; ++i) {
    sumCos += std::cos(targets(i, 0) -
                       clustering.centroids(clustering.assignments[static_cast<std::size_t>(i)], 0));
  }
  // Centroids that are not exact circular means (iteration cap, degenerate
  // clusters) can push the pooled resultant slightly outside [0, 1].
  const double rBar = std::clamp(sumCos / nd, 0.0, 1.0);
  const double kappa = estimateKappa(rBar);

  BicScore score;
  score.k = k;
  score.logLikelihood = -nd * (std::log(kTwoPi) + logBesselI0(kappa)) + kappa * sumCos +
                        countEntropyTerm(clusterCounts(clustering), n);
  score.penalty = 2.0 * k * std::log(nd);
  score.bic = -2.0 * score.logLikelihood + score.penalty;
  return score;
}

std::optional<SelectedK> selectK(const TargetSpace& space, const Matrix& targets,
                                 int kMin, int kMax, std::uint64_t seed, int restarts) {
  if (targets.rows() == 0) throw std::invalid_argument("selectK: empty target set");
  if (!(2 <= kMin && kMin <= kMax)) {
    throw std::invalid_argument("selectK: need 2 <= kMin <= kMax");
  }
  if (restarts < 1) throw std::invalid_argument("selectK: restarts must be >= 1");
  const auto distinct = static_cast<Index>(distinctRows(targets).size());
  const Index kCap = std::min<Index>({static_cast<Index>(kMax), targets.rows() - 1, distinct});

  std::optional<SelectedK> best;
  for (Index k = kMin; k <= kCap; ++k) {
    const std::uint64_t kSeed = deriveSeed(seed, static_cast<std::uint64_t>(k));
    Clustering clustering = kmeans(space, targets, static_cast<int>(k), kSeed);
    for (int run = 1; run < restarts; ++run) {
      Clustering retry = kmeans(space, targets, static_cast<int>(k),
                                deriveSeed(kSeed, static_cast<std::uint64_t>(run)));
      if (retry.objective < clustering.objective) clustering = std::move(retry);
    }
    std::optional<BicScore> score;
    if (space.isCircular()) {
      score = circularBic(targets, clustering);
    } else {
      score = euclideanBic(targets, clustering);
    }
    if (!score) continue;
    if (!best || score->bic < best->score.bic) {
      best = SelectedK{std::move(clustering), *score};
    }
  }
  return best;
}

}  // namespace krf
