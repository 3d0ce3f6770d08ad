#include "krf/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

#include "krf/file_util.hpp"

namespace krf {

namespace {

std::vector<std::string> splitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> splitCells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parseNumber(const std::string& path, std::size_t row, std::size_t column, const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || !std::isfinite(value)) {
    throw ParseError(path, row, column, "expected a finite number, got '" + cell + "'");
  }
  return value;
}

std::string formatNumber(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

struct Header {
  Index p = 0;
  Index q = 0;
  bool circular = false;
  bool hasGroup = false;
};

Header parseHeader(const std::string& path, const std::vector<std::string>& cells) {
  Header h;
  std::size_t i = 0;
  while (i < cells.size() && cells[i] == "f" + std::to_string(i)) ++i;
  h.p = static_cast<Index>(i);
  if (h.p == 0) throw ParseError(path, 1, 1, "header must start with f0");
  if (i < cells.size() && cells[i] == "angle_deg") {
    h.circular = true;
    h.q = 1;
    ++i;
  } else {
    std::size_t t = 0;
    while (i < cells.size() && cells[i] == "t" + std::to_string(t)) {
      ++i;
      ++t;
    }
    h.q = static_cast<Index>(t);
    if (h.q == 0) {
      throw ParseError(path, 1, i + 1, "expected t0 or angle_deg after feature columns");
    }
  }
  if (i < cells.size() && cells[i] == "group") {
    h.hasGroup = true;
    ++i;
  }
  if (i != cells.size()) {
    throw ParseError(path, 1, i + 1, "unexpected header column '" + cells[i] + "'");
  }
  return h;
}

}  // namespace

Dataset loadCsv(const std::string& path) {
  const std::vector<std::string> lines = splitLines(readFileText(path));
  if (lines.empty()) throw ParseError(path, 1, 1, "empty file");
  const Header header = parseHeader(path, splitCells(lines[0]));
  if (lines.size() < 2) throw ParseError(path, 2, 1, "no data rows");

  const std::size_t columns =
      static_cast<std::size_t>(header.p + header.q) + (header.hasGroup ? 1 : 0);
  const Index n = static_cast<Index>(lines.size() - 1);

  Dataset dataset;
  dataset.space = header.circular ? TargetSpace::circular() : TargetSpace::euclidean(header.q);
  dataset.features.resize(n, header.p);
  dataset.targets.resize(n, header.q);
  if (header.hasGroup) dataset.groups.reserve(static_cast<std::size_t>(n));

  for (Index r = 0; r < n; ++r) {
    const std::size_t row = static_cast<std::size_t>(r) + 2;
    const std::vector<std::string> cells = splitCells(lines[static_cast<std::size_t>(r) + 1]);
    if (cells.size() != columns) {
      throw ParseError(path, row, cells.size(),
                       "expected " + std::to_string(columns) + " cells, got " + std::to_string(cells.size()));
    }
    std::size_t c = 0;
    for (Index j = 0; j < header.p; ++j, ++c) {
      dataset.features(r, j) = parseNumber(path, row, c + 1, cells[c]);
    }
    for (Index j = 0; j < header.q; ++j, ++c) {
      double value = parseNumber(path, row, c + 1, cells[c]);
      if (header.circular) value = normalizeAngle(degreesToRadians(value));
      dataset.targets(r, j) = value;
    }
    if (header.hasGroup) {
      if (cells[c].empty()) throw ParseError(path, row, c + 1, "empty group label");
      dataset.groups.push_back(cells[c]);
    }
  }
  return dataset;
}

void saveCsv(const Dataset& dataset, const std::string& path) {
  validateDataset(dataset);
  if (dataset.n() == 0) throw std::invalid_argument("saveCsv: refusing to write an empty dataset");
  std::string out;
  for (Index j = 0; j < dataset.p(); ++j) {
    if (j > 0) out += ',';
    out += "f" + std::to_string(j);
  }
  if (dataset.space.isCircular()) {
    out += ",angle_deg";
  } else {
    for (Index j = 0; j < dataset.space.dim(); ++j) out += ",t" + std::to_string(j);
  }
  if (!dataset.groups.empty()) out += ",group";
  out += '\n';

  for (Index r = 0; r < dataset.n(); ++r) {
    for (Index j = 0; j < dataset.p(); ++j) {
      if (j > 0) out += ',';
      out += formatNumber(dataset.features(r, j));
    }
    for (Index j = 0; j < dataset.targets.cols(); ++j) {
      out += ',';
      out += formatNumber(dataset.space.isCircular() ? radiansToDegrees(dataset.targets(r, j))
                                                     : dataset.targets(r, j));
    }
    if (!dataset.groups.empty()) {
      out += ',';
      out += dataset.groups[static_cast<std::size_t>(r)];
    }
    out += '\n';
  }
  writeFileAtomic(path, out);
}

}  // namespace krf
