#include "krf/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "krf/file_util.hpp"

namespace krf {

namespace {

constexpr char kMagic[8] = {'K', 'R', 'F', 'O', 'R', 'E', 'S', 'T'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

  std::uint8_t u8() { return take(1)[0]; }
  std::uint32_t u32() {
    const std::uint8_t* b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const std::uint8_t* b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t remaining() const { return size_ - at_; }

 private:
  const std::uint8_t* take(std::size_t count) {
    if (size_ - at_ < count) throw ModelIoError("truncated");
    const std::uint8_t* out = data_ + at_;
    at_ += count;
    return out;
  }

  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t at_ = 0;
};

void writeNode(Writer& w, const TreeNode& node, Index q) {
  if (node.isLeaf()) {
    const auto& leaf = node.leaf();
    w.u8(0);
    w.i64(leaf.sampleCount);
    w.u8(leaf.degenerateMean ? 1 : 0);
    for (Index d = 0; d < q; ++d) w.f64(leaf.estimate[d]);
    return;
  }
  const auto& internal = node.internal();
  w.u8(1);
  if (const auto* axis = std::get_if<AxisSplit>(&internal.rule)) {
    w.u8(0);
    w.i64(axis->dim);
    w.f64(axis->threshold);
  } else {
    const auto& classifier = std::get<LinearSplit>(internal.rule).classifier;
    w.u8(1);
    w.i64(classifier.weights.rows());
    w.i64(classifier.weights.cols());
    w.f64(classifier.penaltyC);
    for (Index r = 0; r < classifier.weights.rows(); ++r) {
      for (Index c = 0; c < classifier.weights.cols(); ++c) w.f64(classifier.weights(r, c));
    }
  }
  w.i64(static_cast<std::int64_t>(internal.children.size()));
  for (const TreeNode& child : internal.children) writeNode(w, child, q);
}

TreeNode readNode(Reader& r, Index q, int depth) {
  if (depth > 512) throw ModelIoError("node nesting too deep");
  const std::uint8_t tag = r.u8();
  if (tag == 0) {
    TreeNode::Leaf leaf;
    leaf.sampleCount = r.i64();
    if (leaf.sampleCount < 1) throw ModelIoError("leaf with non-positive sample count");
    leaf.degenerateMean = r.u8() != 0;
    leaf.estimate.resize(q);
    for (Index d = 0; d < q; ++d) leaf.estimate[d] = r.f64();
    TreeNode node;
    node.value = std::move(leaf);
    return node;
  }
  if (tag != 1) throw ModelIoError("bad node tag");
  TreeNode::Internal internal;
  const std::uint8_t ruleTag = r.u8();
  if (ruleTag == 0) {
    AxisSplit axis;
    axis.dim = r.i64();
    axis.threshold = r.f64();
    if (axis.dim < 0) throw ModelIoError("negative split dimension");
    internal.rule = axis;
  } else if (ruleTag == 1) {
    const Index rows = r.i64();
    const Index cols = r.i64();
    if (rows < 2 || cols < 1 || rows > 100000 || cols > 100000) {
      throw ModelIoError("implausible classifier shape");
    }
    OvrClassifier classifier;
    classifier.penaltyC = r.f64();
    classifier.weights.resize(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index c = 0; c < cols; ++c) classifier.weights(i, c) = r.f64();
    }
    internal.rule = LinearSplit{std::move(classifier)};
  } else {
    throw ModelIoError("bad rule tag");
  }
  const std::int64_t childCount = r.i64();
  if (childCount != fanout(internal.rule)) throw ModelIoError("child count does not match rule");
  internal.children.reserve(static_cast<std::size_t>(childCount));
  for (std::int64_t c = 0; c < childCount; ++c) internal.children.push_back(readNode(r, q, depth + 1));
  TreeNode node;
  node.value = std::move(internal);
  return node;
}

void writeConfig(Writer& w, const ForestConfig& config) {
  w.i32(config.numTrees);
  w.f64(config.baggingRatio);
  w.u64(config.seed);
  w.u8(static_cast<std::uint8_t>(config.tree.splitter));
  w.i32(config.tree.k);
  w.i32(config.tree.kMin);
  w.i32(config.tree.kMax);
  w.i32(config.tree.minSamplesLeaf);
  w.f64(config.tree.penaltyC);
  w.f64(config.tree.svmTolerance);
  w.f64(config.tree.featureRatioGamma);
  w.u64(config.tree.seed);
}

ForestConfig readConfig(Reader& r, const TargetSpace& space) {
  ForestConfig config;
  config.numTrees = r.i32();
  config.baggingRatio = r.f64();
  config.seed = r.u64();
  const std::uint8_t splitter = r.u8();
  if (splitter > 2) throw ModelIoError("bad splitter tag");
  config.tree.splitter = static_cast<SplitterKind>(splitter);
  config.tree.k = r.i32();
  config.tree.kMin = r.i32();
  config.tree.kMax = r.i32();
  config.tree.minSamplesLeaf = r.i32();
  config.tree.penaltyC = r.f64();
  config.tree.svmTolerance = r.f64();
  config.tree.featureRatioGamma = r.f64();
  config.tree.seed = r.u64();
  config.tree.space = space;
  return config;
}

}  // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int bit = 0; bit < 8; ++bit) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i) crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> serializeModel(const Forest& forest) {
  if (forest.trees.empty()) throw std::invalid_argument("serializeModel: empty forest");
  Writer w;
  for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
  w.u32(kVersion);
  w.u8(forest.space.isCircular() ? 1 : 0);
  w.i64(forest.space.dim());
  w.i64(forest.featureDim);
  writeConfig(w, forest.config);
  w.i64(static_cast<std::int64_t>(forest.trees.size()));
  for (const TreeNode& tree : forest.trees) writeNode(w, tree, forest.space.dim());
  w.u32(crc32(w.bytes().data(), w.bytes().size()));
  return std::move(w.bytes());
}

Forest deserializeModel(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8) throw ModelIoError("truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) throw ModelIoError("bad magic");
  const std::size_t body = bytes.size() - 4;
  Reader crcReader(bytes.data() + body, 4);
  if (crcReader.u32() != crc32(bytes.data(), body)) throw ModelIoError("checksum mismatch");

  Reader r(bytes.data() + sizeof(kMagic), body - sizeof(kMagic));
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw ModelIoError("unsupported version " + std::to_string(version));
  }
  Forest forest;
  const std::uint8_t spaceKind = r.u8();
  const Index q = r.i64();
  if (spaceKind == 1) {
    if (q != 1) throw ModelIoError("circular space must have dimension 1");
    forest.space = TargetSpace::circular();
  } else if (spaceKind == 0) {
    if (q < 1) throw ModelIoError("bad target dimension");
    forest.space = TargetSpace::euclidean(q);
  } else {
    throw ModelIoError("bad space tag");
  }
  forest.featureDim = r.i64();
  if (forest.featureDim < 1) throw ModelIoError("bad feature dimension");
  forest.config = readConfig(r, forest.space);
  const std::int64_t treeCount = r.i64();
  if (treeCount < 1 || treeCount > 1000000) throw ModelIoError("implausible tree count");
  forest.trees.reserve(static_cast<std::size_t>(treeCount));
  for (std::int64_t i = 0; i < treeCount; ++i) forest.trees.push_back(readNode(r, q, 0));
  if (r.remaining() != 0) throw ModelIoError("trailing bytes");
  return forest;
}

void saveModel(const Forest& forest, const std::string& path) {
  writeFileAtomic(path, serializeModel(forest));
}

Forest loadModel(const std::string& path) {
  return deserializeModel(readFileBytes(path));
}

}  // namespace krf
