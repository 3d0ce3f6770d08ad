#include "krf/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "krf/rng.hpp"

namespace krf {

namespace {

bool rowLess(const Matrix& m, Index a, Index b) {
  for (Index d = 0; d < m.cols(); ++d) {
    if (m(a, d) < m(b, d)) return true;
    if (m(a, d) > m(b, d)) return false;
  }
  return false;
}

bool rowEqual(const Matrix& m, Index a, Index b) {
  for (Index d = 0; d < m.cols(); ++d) {
    if (m(a, d) != m(b, d)) return false;
  }
  return true;
}

double rowLoss(const TargetSpace& space, const Matrix& targets, Index i,
               const Matrix& centroids, Index j) {
  if (space.isCircular()) {
    return 1.0 - std::cos(targets(i, 0) - centroids(j, 0));
  }
  return (targets.row(i) - centroids.row(j)).squaredNorm();
}

/// Drops clusters with zero members; reindexes assignments, preserving the
/// relative order of the survivors. Returns the surviving old indices.
std::vector<int> dropEmptyClusters(std::vector<int>& assignments, int k) {
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (int a : assignments) ++counts[static_cast<std::size_t>(a)];
  std::vector<int> remap(static_cast<std::size_t>(k), -1);
  std::vector<int> survivors;
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      remap[static_cast<std::size_t>(j)] = static_cast<int>(survivors.size());
      survivors.push_back(j);
    }
  }
  if (static_cast<int>(survivors.size()) < k) {
    for (int& a : assignments) a = remap[static_cast<std::size_t>(a)];
  }
  return survivors;
}

Matrix gatherRows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = m.row(rows[i]);
  return out;
}

}  // namespace

std::vector<Index> distinctRows(const Matrix& values) {
  std::vector<Index> order(static_cast<std::size_t>(values.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return rowLess(values, a, b); });
  std::vector<Index> out;
  for (Index i : order) {
    if (out.empty() || !rowEqual(values, out.back(), i)) out.push_back(i);
  }
  return out;
}

std::pair<std::vector<int>, double> assignToCentroids(const TargetSpace& space,
                                                      const Matrix& targets,
                                                      const Matrix& centroids) {
  if (targets.rows() == 0) throw std::invalid_argument("assignToCentroids: empty target set");
  if (centroids.rows() == 0) throw std::invalid_argument("assignToCentroids: no centroids");
  if (targets.cols() != centroids.cols()) {
    throw std::invalid_argument("assignToCentroids: dimension mismatch");
  }
  std::vector<int> assignments(static_cast<std::size_t>(targets.rows()));
  double objective = 0.0;
  for (Index i = 0; i < targets.rows(); ++i) {
    int best = 0;
    double bestLoss = rowLoss(space, targets, i, centroids, 0);
    for (Index j = 1; j < centroids.rows(); ++j) {
      const double l = rowLoss(space, targets, i, centroids, j);
      if (l < bestLoss) {
        bestLoss = l;
        best = static_cast<int>(j);
      }
    }
    assignments[static_cast<std::size_t>(i)] = best;
    objective += bestLoss;
  }
  return {std::move(assignments), objective};
}

Matrix updateCentroids(const TargetSpace& space, const Matrix& targets,
                       const std::vector<int>& assignments, const Matrix& previous) {
  const int k = static_cast<int>(previous.rows());
  Matrix centroids = previous;
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(k));
  for (Index i = 0; i < targets.rows(); ++i) {
    members[static_cast<std::size_t>(assignments[static_cast<std::size_t>(i)])].push_back(i);
  }
  for (int j = 0; j < k; ++j) {
    const auto& rows = members[static_cast<std::size_t>(j)];
    if (rows.empty()) continue;
    auto m = tryMean(space, gatherRows(targets, rows));
    if (m) centroids.row(j) = m->transpose();
  }
  return centroids;
}

Clustering lloyd(const TargetSpace& space, const Matrix& targets,
                 const Matrix& initialCentroids, int maxIters) {
  if (maxIters < 1) throw std::invalid_argument("lloyd: maxIters must be >= 1");
  Matrix centroids = initialCentroids;
  auto [assignments, objective] = assignToCentroids(space, targets, centroids);
  {
    const auto survivors = dropEmptyClusters(assignments, static_cast<int>(centroids.rows()));
    if (static_cast<Index>(survivors.size()) < centroids.rows()) {
      Matrix kept(static_cast<Index>(survivors.size()), centroids.cols());
      for (std::size_t j = 0; j < survivors.size(); ++j) kept.row(static_cast<Index>(j)) = centroids.row(survivors[j]);
      centroids = std::move(kept);
    }
  }

  for (int iter = 0; iter < maxIters; ++iter) {
    Matrix updated = updateCentroids(space, targets, assignments, centroids);
    auto [nextAssignments, nextObjective] = assignToCentroids(space, targets, updated);
    if (nextObjective > objective + 1e-9 * (1.0 + std::abs(objective))) {
      throw std::logic_error("lloyd: objective increased across an iteration");
    }
    const bool unchanged = nextAssignments == assignments;
    const auto survivors = dropEmptyClusters(nextAssignments, static_cast<int>(updated.rows()));
    if (static_cast<Index>(survivors.size()) < updated.rows()) {
      Matrix kept(static_cast<Index>(survivors.size()), updated.cols());
      for (std::size_t j = 0; j < survivors.size(); ++j) kept.row(static_cast<Index>(j)) = updated.row(survivors[j]);
      centroids = std::move(kept);
      assignments = std::move(nextAssignments);
      objective = nextObjective;
      continue;  // cluster set changed; convergence is re-checked next round
    }
    centroids = std::move(updated);
    objective = nextObjective;
    if (unchanged) break;
    assignments = std::move(nextAssignments);
  }

  Clustering out;
  out.assignments = std::move(assignments);
  out.centroids = std::move(centroids);
  out.objective = objective;
  out.kEffective = static_cast<int>(out.centroids.rows());
  return out;
}

Clustering kmeans(const TargetSpace& space, const Matrix& targets, int k,
                  std::uint64_t seed, int maxIters) {
  if (targets.rows() == 0) throw std::invalid_argument("kmeans: empty target set");
  if (targets.cols() != space.dim()) throw std::invalid_argument("kmeans: dimension mismatch");
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");

  const std::vector<Index> distinct = distinctRows(targets);
  const Index kEff = std::min<Index>(k, static_cast<Index>(distinct.size()));
  Rng rng = makeRng(seed);
  const std::vector<Index> chosen =
      sampleWithoutReplacement(static_cast<Index>(distinct.size()), kEff, rng);
  Matrix init(kEff, targets.cols());
  for (Index j = 0; j < kEff; ++j) {
    init.row(j) = targets.row(distinct[static_cast<std::size_t>(chosen[static_cast<std::size_t>(j)])]);
  }
  return lloyd(space, targets, init, maxIters);
}

Clustering clusteringFromAssignments(const TargetSpace& space, const Matrix& targets,
                                     const std::vector<int>& assignments, int k) {
  if (static_cast<Index>(assignments.size()) != targets.rows()) {
    throw std::invalid_argument("clusteringFromAssignments: size mismatch");
  }
  Clustering out;
  out.assignments = assignments;
  dropEmptyClusters(out.assignments, k);
  const int kEff = out.assignments.empty()
                       ? 0
                       : 1 + *std::max_element(out.assignments.begin(), out.assignments.end());
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(kEff));
  for (Index i = 0; i < targets.rows(); ++i) {
    members[static_cast<std::size_t>(out.assignments[static_cast<std::size_t>(i)])].push_back(i);
  }
  out.centroids.resize(kEff, targets.cols());
  for (int j = 0; j < kEff; ++j) {
    const auto& rows = members[static_cast<std::size_t>(j)];
    auto m = tryMean(space, gatherRows(targets, rows));
    if (m) {
      out.centroids.row(j) = m->transpose();
    } else {
      out.centroids.row(j) = targets.row(rows.front());
    }
  }
  out.objective = 0.0;
  for (Index i = 0; i < targets.rows(); ++i) {
    out.objective += rowLoss(space, targets, i, out.centroids,
                             out.assignments[static_cast<std::size_t>(i)]);
  }
  out.kEffective = kEff;
  return out;
}

}  // namespace krf
