#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace krf {

// Writes to "<path>.tmp" then renames over path, so readers never observe a
// partial file. Throws std::runtime_error on I/O failure.
void writeFileAtomic(const std::string& path, const std::string& contents);
void writeFileAtomic(const std::string& path, const std::vector<std::uint8_t>& contents);

// Whole-file reads; throw std::runtime_error when the file cannot be opened.
std::string readFileText(const std::string& path);
std::vector<std::uint8_t> readFileBytes(const std::string& path);

}  // namespace krf
