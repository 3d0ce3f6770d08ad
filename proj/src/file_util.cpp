#include "krf/file_util.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace krf {

namespace {

void writeAtomicImpl(const std::string& path, const char* data, std::size_t size) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + tmp + " -> " + path + " (" + ec.message() + ")");
  }
}

}  // namespace

void writeFileAtomic(const std::string& path, const std::string& contents) {
  writeAtomicImpl(path, contents.data(), contents.size());
}

void writeFileAtomic(const std::string& path, const std::vector<std::uint8_t>& contents) {
  writeAtomicImpl(path, reinterpret_cast<const char*>(contents.data()), contents.size());
}

std::string readFileText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::uint8_t> readFileBytes(const std::string& path) {
  const std::string text = readFileText(path);
  return std::vector<std::uint8_t>(text.begin(), text.end());
}

}  // namespace krf
