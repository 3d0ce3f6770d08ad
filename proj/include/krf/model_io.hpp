#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "krf/forest.hpp"

namespace krf {

class ModelIoError : public std::runtime_error {
 public:
  explicit ModelIoError(const std::string& message) : std::runtime_error("model file: " + message) {}
};

// Binary model format, little-endian throughout:
//   "KRFOREST"  8-byte magic
//   u32         format version (currently 1)
//   payload     space, feature dim, config snapshot, trees (all reals f64)
//   u32         CRC-32 of everything before it
// Serialization is canonical: save(load(save(f))) writes identical bytes.
std::vector<std::uint8_t> serializeModel(const Forest& forest);
Forest deserializeModel(const std::vector<std::uint8_t>& bytes);

void saveModel(const Forest& forest, const std::string& path);
Forest loadModel(const std::string& path);

std::uint32_t crc32(const std::uint8_t* data, std::size_t size);

}  // namespace krf
