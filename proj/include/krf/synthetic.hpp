#pragma once

#include <cstdint>

#include "krf/dataset.hpp"

namespace krf {

// Deterministic synthetic datasets. structureSeed fixes the layout (region
// geometry, blob centers, feature embedding) independently of seed, which
// drives the sample draws, so train and test sets can share one structure.
struct SyntheticSpec {
  enum class Generator { PiecewiseConstant, GaussianBlobs, CircularBlobs, RotationField };

  Generator generator = Generator::GaussianBlobs;
  Index n = 100;
  Index p = 2;
  std::uint64_t seed = 0;
  std::uint64_t structureSeed = 9001;

  // PiecewiseConstant: `regions` cells with one constant target each, plus
  // N(0, noiseSigma) target noise. Axis-aligned boxes over [0,1]^p by
  // default; with oblique=true the cells are the argmax regions of random
  // affine scorers over standard-normal features.
  int regions = 10;
  double noiseSigma = 0.0;
  bool oblique = false;

  // GaussianBlobs: 1-D targets from k blobs at 0, separation, 2*separation...
  // each N(mean, sigma); features echo the target with N(0, sigma) noise.
  int k = 3;
  double separation = 50.0;
  double sigma = 1.0;

  // CircularBlobs: angles from k evenly spaced mean directions with
  // sigmaDeg wrapped-normal spread.
  double sigmaDeg = 5.0;

  // RotationField: latent angle uniform in [centerDeg - spreadDeg,
  // centerDeg + spreadDeg]; target = latent + N(0, noiseDeg).
  double noiseDeg = 5.0;
  double centerDeg = 0.0;
  double spreadDeg = 180.0;

  // CircularBlobs / RotationField: features = A (cos t, sin t) + noise with a
  // fixed random p x 2 matrix A and N(0, featureNoise) per-feature noise.
  double featureNoise = 0.1;

  // CircularBlobs / RotationField: dimension of an extra correlated nuisance
  // component B z added to the features, with a fixed random p x nuisanceDim
  // basis B (scaled to unit per-feature variance) and per-sample
  // standard-normal z. Zero disables it. Axis-aligned thresholds see the
  // nuisance as signal-sized noise; linear combinations can cancel it.
  Index nuisanceDim = 0;
};

Dataset generate(const SyntheticSpec& spec);

}  // namespace krf
