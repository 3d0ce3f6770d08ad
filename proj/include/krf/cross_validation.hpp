#pragma once

#include <string>
#include <vector>

#include "krf/dataset.hpp"
#include "krf/forest.hpp"

namespace krf {

struct CvCandidate {
  std::string label;
  ForestConfig config;
};

struct CvOptions {
  int folds = 5;
  std::uint64_t seed = 0;
  // Leave-one-group-out over the dataset's group column; `folds` is ignored.
  bool byGroup = false;
};

struct CvEntry {
  CvCandidate candidate;
  std::vector<double> foldMae;
  double meanMae = 0.0;
  bool skipped = false;
};

struct CvResult {
  std::vector<CvEntry> entries;
  std::size_t bestIndex = 0;
  int foldCount = 0;
};

// Evaluates every candidate on the same deterministic fold split and returns
// per-candidate mean validation MAE. Candidates whose training ever sees an
// empty train or validation part are marked skipped. Ties keep the earliest
// candidate. Throws when every candidate is skipped.
CvResult crossValidate(const Dataset& dataset, const std::vector<CvCandidate>& grid,
                       const CvOptions& options);

// Validation-row index lists, one per fold (exposed for tests).
std::vector<std::vector<Index>> makeFolds(const Dataset& dataset, const CvOptions& options);

}  // namespace krf
