#include "krf/cross_validation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "krf/evaluation.hpp"
#include "krf/rng.hpp"

namespace krf {

std::vector<std::vector<Index>> makeFolds(const Dataset& dataset, const CvOptions& options) {
  const Index n = dataset.n();
  if (n < 2) throw std::invalid_argument("crossValidate: need at least two samples");

  std::vector<std::vector<Index>> folds;
  if (options.byGroup) {
    if (dataset.groups.empty()) {
      throw std::invalid_argument("crossValidate: byGroup requires a group column");
    }
    std::vector<std::string> order;  // groups in order of first appearance
    for (Index i = 0; i < n; ++i) {
      const std::string& g = dataset.groups[static_cast<std::size_t>(i)];
      auto it = std::find(order.begin(), order.end(), g);
      std::size_t fold;
      if (it == order.end()) {
        fold = order.size();
        order.push_back(g);
        folds.emplace_back();
      } else {
        fold = static_cast<std::size_t>(it - order.begin());
      }
      folds[fold].push_back(i);
    }
    if (folds.size() < 2) throw std::invalid_argument("crossValidate: need at least two groups");
    return folds;
  }

  if (options.folds < 2) throw std::invalid_argument("crossValidate: folds must be >= 2");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng = makeRng(options.seed, 0);
  shuffle(perm, rng);
  folds.resize(static_cast<std::size_t>(options.folds));
  // Contiguous chunks of the shuffled order; the first n % folds chunks get
  // one extra row.
  const Index base = n / options.folds;
  const Index extra = n % options.folds;
  std::size_t at = 0;
  for (int f = 0; f < options.folds; ++f) {
    const Index size = base + (f < extra ? 1 : 0);
    for (Index i = 0; i < size; ++i) folds[static_cast<std::size_t>(f)].push_back(perm[at++]);
  }
  return folds;
}

CvResult crossValidate(const Dataset& dataset, const std::vector<CvCandidate>& grid,
                       const CvOptions& options) {
  validateDataset(dataset);
  if (grid.empty()) throw std::invalid_argument("crossValidate: empty candidate grid");
  const std::vector<std::vector<Index>> folds = makeFolds(dataset, options);

  std::vector<std::vector<Index>> trainRows(folds.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g == f) continue;
      trainRows[f].insert(trainRows[f].end(), folds[g].begin(), folds[g].end());
    }
    std::sort(trainRows[f].begin(), trainRows[f].end());
  }

  CvResult result;
  result.foldCount = static_cast<int>(folds.size());
  result.entries.reserve(grid.size());
  bool haveBest = false;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    CvEntry entry;
    entry.candidate = grid[c];
    for (std::size_t f = 0; f < folds.size(); ++f) {
      if (folds[f].empty() || trainRows[f].empty()) {
        entry.skipped = true;
        break;
      }
      const Dataset train = subset(dataset, trainRows[f]);
      const Dataset val = subset(dataset, folds[f]);
      ForestConfig config = grid[c].config;
      config.seed = deriveSeed(grid[c].config.seed, static_cast<std::uint64_t>(f));
      entry.foldMae.push_back(evaluate(trainForest(train.features, train.targets, config), val).mae);
    }
    if (!entry.skipped) {
      entry.meanMae = std::accumulate(entry.foldMae.begin(), entry.foldMae.end(), 0.0) /
                      static_cast<double>(entry.foldMae.size());
      if (!haveBest || entry.meanMae < result.entries[result.bestIndex].meanMae) {
        haveBest = true;
        result.bestIndex = c;
      }
    }
    result.entries.push_back(std::move(entry));
  }
  if (!haveBest) throw std::runtime_error("crossValidate: every candidate was skipped");
  return result;
}

}  // namespace krf
