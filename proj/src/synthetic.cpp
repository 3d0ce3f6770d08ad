#include "krf/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "krf/rng.hpp"

namespace krf {

namespace {

void validateSpec(const SyntheticSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (spec.p < 1) throw std::invalid_argument("generate: p must be >= 1");
  if (spec.regions < 1) throw std::invalid_argument("generate: regions must be >= 1");
  if (spec.k < 1) throw std::invalid_argument("generate: k must be >= 1");
  if (spec.noiseSigma < 0.0 || spec.sigma < 0.0 || spec.sigmaDeg < 0.0 || spec.noiseDeg < 0.0 ||
      spec.featureNoise < 0.0) {
    throw std::invalid_argument("generate: noise scales must be >= 0");
  }
  if (spec.separation < 0.0) throw std::invalid_argument("generate: separation must be >= 0");
  if (!(spec.spreadDeg > 0.0 && spec.spreadDeg <= 180.0)) {
    throw std::invalid_argument("generate: spreadDeg must be in (0, 180]");
  }
  if (spec.nuisanceDim < 0) throw std::invalid_argument("generate: nuisanceDim must be >= 0");
}

std::vector<double> regionConstants(int regions, Rng& structRng) {
  std::vector<double> constants(static_cast<std::size_t>(regions));
  for (double& c : constants) c = 100.0 * uniformReal(structRng);
  return constants;
}

struct Box {
  Vector lo;
  Vector hi;
  double volume() const { return (hi - lo).prod(); }
};

// Splits the largest box along a random dimension until `regions` cells tile
// [0,1]^p. Cut positions stay in the middle half of the extent so no cell
// collapses to a sliver.
std::vector<Box> boxPartition(Index p, int regions, Rng& structRng) {
  std::vector<Box> boxes{{Vector::Zero(p), Vector::Ones(p)}};
  while (static_cast<int>(boxes.size()) < regions) {
    std::size_t widest = 0;
    for (std::size_t b = 1; b < boxes.size(); ++b) {
      if (boxes[b].volume() > boxes[widest].volume()) widest = b;
    }
    const Index dim = static_cast<Index>(uniformIndex(structRng, static_cast<std::uint64_t>(p)));
    Box& box = boxes[widest];
    const double extent = box.hi[dim] - box.lo[dim];
    const double cut = box.lo[dim] + extent * (0.25 + 0.5 * uniformReal(structRng));
    Box right = box;
    right.lo[dim] = cut;
    box.hi[dim] = cut;
    boxes.push_back(std::move(right));
  }
  return boxes;
}

int boxRegion(const std::vector<Box>& boxes, const Vector& x) {
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    bool inside = true;
    for (Index d = 0; d < x.size() && inside; ++d) {
      inside = x[d] >= boxes[b].lo[d] && x[d] < boxes[b].hi[d];
    }
    if (inside) return static_cast<int>(b);
  }
  return static_cast<int>(boxes.size()) - 1;  // x on the outer boundary
}

Matrix normalMatrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = normalDraw(rng);
  }
  return m;
}

Dataset piecewiseConstant(const SyntheticSpec& spec) {
  Rng structRng = makeRng(spec.structureSeed);
  Rng rng = makeRng(spec.seed);
  Dataset out;
  out.space = TargetSpace::euclidean(1);
  out.features.resize(spec.n, spec.p);
  out.targets.resize(spec.n, 1);

  if (spec.oblique) {
    Matrix scorerW = normalMatrix(spec.regions, spec.p, structRng);
    scorerW.rowwise().normalize();
    Vector scorerB(spec.regions);
    for (Index j = 0; j < scorerB.size(); ++j) scorerB[j] = 0.6 * uniformReal(structRng) - 0.3;
    const std::vector<double> constants = regionConstants(spec.regions, structRng);
    for (Index i = 0; i < spec.n; ++i) {
      Vector x(spec.p);
      for (Index d = 0; d < spec.p; ++d) x[d] = normalDraw(rng);
      Index region = 0;
      (scorerW * x + scorerB).maxCoeff(&region);
      out.features.row(i) = x.transpose();
      out.targets(i, 0) =
          constants[static_cast<std::size_t>(region)] + spec.noiseSigma * normalDraw(rng);
    }
    return out;
  }

  const std::vector<Box> boxes = boxPartition(spec.p, spec.regions, structRng);
  const std::vector<double> constants = regionConstants(spec.regions, structRng);
  for (Index i = 0; i < spec.n; ++i) {
    Vector x(spec.p);
    for (Index d = 0; d < spec.p; ++d) x[d] = uniformReal(rng);
    out.features.row(i) = x.transpose();
    out.targets(i, 0) = constants[static_cast<std::size_t>(boxRegion(boxes, x))] +
                        spec.noiseSigma * normalDraw(rng);
  }
  return out;
}

Dataset gaussianBlobs(const SyntheticSpec& spec) {
  Rng rng = makeRng(spec.seed);
  Dataset out;
  out.space = TargetSpace::euclidean(1);
  out.features.resize(spec.n, spec.p);
  out.targets.resize(spec.n, 1);
  for (Index i = 0; i < spec.n; ++i) {
    const auto blob = static_cast<double>(uniformIndex(rng, static_cast<std::uint64_t>(spec.k)));
    const double t = blob * spec.separation + spec.sigma * normalDraw(rng);
    out.targets(i, 0) = t;
    for (Index d = 0; d < spec.p; ++d) out.features(i, d) = t + spec.sigma * normalDraw(rng);
  }
  return out;
}

// Fixed part of the circular feature map: the signal basis A plus the
// optional nuisance basis B, both drawn from the structure stream.
struct AngleEmbedding {
  Matrix signal;    // p x 2
  Matrix nuisance;  // p x nuisanceDim, empty when disabled
};

AngleEmbedding makeEmbedding(const SyntheticSpec& spec, Rng& structRng) {
  AngleEmbedding e;
  e.signal = normalMatrix(spec.p, 2, structRng);
  if (spec.nuisanceDim > 0) {
    e.nuisance = normalMatrix(spec.p, spec.nuisanceDim, structRng) /
                 std::sqrt(static_cast<double>(spec.nuisanceDim));
  }
  return e;
}

void embedAngle(const AngleEmbedding& embedding, double angle, double featureNoise, Rng& rng,
                Matrix& features, Index row) {
  const Vector unit = (Vector(2) << std::cos(angle), std::sin(angle)).finished();
  Vector f = embedding.signal * unit;
  if (embedding.nuisance.cols() > 0) {
    Vector z(embedding.nuisance.cols());
    for (Index j = 0; j < z.size(); ++j) z[j] = normalDraw(rng);
    f += embedding.nuisance * z;
  }
  for (Index d = 0; d < f.size(); ++d) f[d] += featureNoise * normalDraw(rng);
  features.row(row) = f.transpose();
}

Dataset circularBlobs(const SyntheticSpec& spec) {
  Rng structRng = makeRng(spec.structureSeed);
  Rng rng = makeRng(spec.seed);
  const AngleEmbedding embedding = makeEmbedding(spec, structRng);
  Dataset out;
  out.space = TargetSpace::circular();
  out.features.resize(spec.n, spec.p);
  out.targets.resize(spec.n, 1);
  for (Index i = 0; i < spec.n; ++i) {
    const auto blob = static_cast<double>(uniformIndex(rng, static_cast<std::uint64_t>(spec.k)));
    const double meanDeg = blob * 360.0 / static_cast<double>(spec.k);
    const double angle =
        normalizeAngle(degreesToRadians(meanDeg + spec.sigmaDeg * normalDraw(rng)));
    out.targets(i, 0) = angle;
    embedAngle(embedding, angle, spec.featureNoise, rng, out.features, i);
  }
  return out;
}

Dataset rotationField(const SyntheticSpec& spec) {
  Rng structRng = makeRng(spec.structureSeed);
  Rng rng = makeRng(spec.seed);
  const AngleEmbedding embedding = makeEmbedding(spec, structRng);
  Dataset out;
  out.space = TargetSpace::circular();
  out.features.resize(spec.n, spec.p);
  out.targets.resize(spec.n, 1);
  for (Index i = 0; i < spec.n; ++i) {
    const double latentDeg = spec.centerDeg + spec.spreadDeg * (2.0 * uniformReal(rng) - 1.0);
    const double latent = normalizeAngle(degreesToRadians(latentDeg));
    out.targets(i, 0) = normalizeAngle(latent + degreesToRadians(spec.noiseDeg) * normalDraw(rng));
    embedAngle(embedding, latent, spec.featureNoise, rng, out.features, i);
  }
  return out;
}

}  // namespace

Dataset generate(const SyntheticSpec& spec) {
  validateSpec(spec);
  switch (spec.generator) {
    case SyntheticSpec::Generator::PiecewiseConstant:
      return piecewiseConstant(spec);
    case SyntheticSpec::Generator::GaussianBlobs:
      return gaussianBlobs(spec);
    case SyntheticSpec::Generator::CircularBlobs:
      return circularBlobs(spec);
    case SyntheticSpec::Generator::RotationField:
      return rotationField(spec);
  }
  throw std::logic_error("generate: unknown generator");
}

}  // namespace krf
