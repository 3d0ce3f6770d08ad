#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "krf/target_space.hpp"
#include "krf/types.hpp"

namespace krf {

/// Hard clustering of a target set. Invariants: every assignment index is
/// < kEffective, no cluster is empty, and `objective` is the sum over rows
/// of loss(space, target, centroid of its cluster).
struct Clustering {
  std::vector<int> assignments;
  Matrix centroids;  // kEffective x q, one centroid per row
  double objective = 0.0;
  int kEffective = 0;
};

/// Nearest-centroid assignment under the space loss, ties broken by lowest
/// cluster index. Returns per-row assignments and the summed loss.
std::pair<std::vector<int>, double> assignToCentroids(const TargetSpace& space,
                                                      const Matrix& targets,
                                                      const Matrix& centroids);

/// Mean update for one Lloyd step. A cluster whose circular mean is
/// degenerate keeps its previous centroid (its cost is unaffected by the
/// centroid choice, so monotonicity is preserved).
Matrix updateCentroids(const TargetSpace& space, const Matrix& targets,
                       const std::vector<int>& assignments, const Matrix& previous);

/// Lloyd iterations from explicit initial centroids: assign, re-mean, repeat
/// until the assignments stabilize or maxIters passes. Clusters that lose all
/// points are dropped and the remaining ones reindexed in order. The returned
/// assignments always equal assignToCentroids() on the returned centroids.
Clustering lloyd(const TargetSpace& space, const Matrix& targets,
                 const Matrix& initialCentroids, int maxIters = 100);

/// k-means with initial centroids drawn uniformly without replacement from
/// the distinct target values. k larger than the number of distinct values is
/// clamped (reported via kEffective, not an error).
Clustering kmeans(const TargetSpace& space, const Matrix& targets, int k,
                  std::uint64_t seed, int maxIters = 100);

/// Builds a valid Clustering from given assignments in [0, k): drops empty
/// clusters, computes centroids as cluster means (a degenerate circular
/// cluster keeps its first member), sums the objective.
Clustering clusteringFromAssignments(const TargetSpace& space, const Matrix& targets,
                                     const std::vector<int>& assignments, int k);

/// Rows with lexicographically distinct values, in sorted order.
std::vector<Index> distinctRows(const Matrix& values);

}  // namespace krf
