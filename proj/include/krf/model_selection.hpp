#pragma once

#include <cstdint>
#include <optional>

#include "krf/clustering.hpp"
#include "krf/target_space.hpp"
#include "krf/types.hpp"

namespace krf {

/// One evaluated candidate cluster count. `bic` is always exactly
/// -2 * logLikelihood + penalty.
struct BicScore {
  int k = 0;
  double logLikelihood = 0.0;
  double penalty = 0.0;
  double bic = 0.0;
};

/// Concentration cap: the kappa approximation diverges as the mean resultant
/// approaches 1, so resultants >= 1 - 1e-12 are clamped to this value.
inline constexpr double kKappaMax = 5e11;

/// von Mises concentration from the mean resultant length:
/// kappa ~ 1 / (2 (1 - rBar)).
double estimateKappa(double rBar);

/// BIC of a shared-variance isotropic Gaussian mixture fitted to the
/// clustering. The shared variance uses the unbiased denominator N - K.
/// Not computable (nullopt) when N <= K or when the variance vanishes.
std::optional<BicScore> euclideanBic(const Matrix& targets, const Clustering& clustering);

/// BIC of a shared-concentration von Mises mixture fitted to the clustering
/// of angles. kappa is estimated from the pooled mean resultant about the
/// cluster centroids; ln I0 is evaluated in the log domain so arbitrarily
/// concentrated clusters stay finite.
BicScore circularBic(const Matrix& targets, const Clustering& clustering);

struct SelectedK {
  Clustering clustering;
  BicScore score;
};

/// For every K in [kMin, min(kMax, N-1, distinct targets)], runs k-means
/// `restarts` times, keeps the lowest-objective clustering, scores it with
/// the space-appropriate BIC and returns the minimizer. Each run gets an
/// independently derived RNG stream from `seed`, so candidates can be
/// evaluated in any order; the first run of each K draws the stream the
/// restarts=1 form uses, so a larger budget only ever improves the per-K
/// clustering. K values whose BIC is not computable are skipped; nullopt
/// when none is. The default budget trades speed for a reliable sweep;
/// per-node tree splitting passes restarts=1 to stay stochastic.
std::optional<SelectedK> selectK(const TargetSpace& space, const Matrix& targets,
                                 int kMin, int kMax, std::uint64_t seed, int restarts = 20);

}  // namespace krf
