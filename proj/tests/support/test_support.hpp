#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testsupport {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(UAVLINK_TEST_DATA_DIR) / name;
}

inline std::filesystem::path config_path(const std::string& name) {
  return std::filesystem::path(UAVLINK_CONFIG_DIR) / name;
}

// Hex dump with '#' comment lines and free whitespace.
inline std::vector<std::uint8_t> read_hex(const std::string& name) {
  std::ifstream in(data_path(name));
  if (!in) throw std::runtime_error("missing golden file " + name);
  std::vector<std::uint8_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream tokens(line);
    std::string byte;
    while (tokens >> byte) out.push_back(static_cast<std::uint8_t>(std::stoul(byte, nullptr, 16)));
  }
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("uavlink_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
