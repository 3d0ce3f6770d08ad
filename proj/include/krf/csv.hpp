#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "krf/dataset.hpp"

namespace krf {

// CSV schema (one header row, comma-separated, no quoting):
//   f0,...,f{p-1},t0,...,t{q-1}[,group]     Euclidean targets
//   f0,...,f{p-1},angle_deg[,group]         circular target, degrees in file
// Circular angles are normalized into [0, 2pi) radians on load and written
// back as degrees in [0, 360).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, std::size_t row, std::size_t column, const std::string& message)
      : std::runtime_error(path + ":" + std::to_string(row) + ":" + std::to_string(column) + ": " + message),
        row_(row),
        column_(column) {}

  // 1-based; row 1 is the header.
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

Dataset loadCsv(const std::string& path);
void saveCsv(const Dataset& dataset, const std::string& path);

}  // namespace krf
