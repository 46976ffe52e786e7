#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "uavlink/core/error.hpp"

namespace uavlink::harness {

// Fixed-point text for doubles; locale-independent, so files are byte-stable.
inline std::string fmt_fixed(double v, int precision = 3) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

// Shortest round-trip-ish text for axis labels (10, 0.5, 2).
inline std::string fmt_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

inline std::string fmt_hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw OutputError("cannot write '" + path.string() + "'");
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw OutputError("error writing '" + path_.string() + "'");
  }

  ~CsvWriter() = default;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Header-keyed table. Cells never contain commas or quotes in our files.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read '" + path.string() + "'");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) return t;
  t.header = split_csv_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv_line(line);
    cells.resize(t.header.size());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace uavlink::harness
