#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "uavlink/core/error.hpp"
#include "uavlink/harness/csv.hpp"
#include "uavlink/video/encoder.hpp"

namespace uavlink::harness {

enum class PlotKind { kFig3, kFig4, kFig5 };

inline std::optional<PlotKind> parse_plot_kind(const std::string& s) {
  if (s == "fig3") return PlotKind::kFig3;
  if (s == "fig4") return PlotKind::kFig4;
  if (s == "fig5") return PlotKind::kFig5;
  return std::nullopt;
}

inline std::string to_string(PlotKind k) {
  switch (k) {
    case PlotKind::kFig3: return "fig3";
    case PlotKind::kFig4: return "fig4";
    case PlotKind::kFig5: return "fig5";
  }
  return "";
}

// Missing axis, empty results and similar; nothing is written.
class PlotDataError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline CsvTable load_results_table(const std::filesystem::path& dir) {
  for (const char* name : {"summary.csv", "results.csv"}) {
    if (std::filesystem::exists(dir / name)) return read_csv(dir / name);
  }
  throw PlotDataError("no results.csv or summary.csv in '" + dir.string() + "'");
}

inline std::size_t require_column(const CsvTable& t, const std::string& name) {
  auto c = t.column(name);
  if (!c) throw PlotDataError("results table has no '" + name + "' column");
  return *c;
}

inline double num(const std::string& s) { return s.empty() ? 0.0 : std::stod(s); }

inline std::string us_to_ms(const std::string& s) { return s.empty() ? "" : fmt_fixed(num(s) / 1e3, 3); }

inline int pixels(const std::string& res) {
  if (auto r = video::parse_resolution(res)) return video::width(*r) * video::height(*r);
  return 0;
}

inline std::string fig3(const CsvTable& t) {
  const auto id = require_column(t, "scenario_id");
  const auto f = require_column(t, "freq_hz");
  const auto h = require_column(t, "height_m");
  const auto lo = require_column(t, "delay_min_us");
  const auto avg = require_column(t, "delay_avg_us");
  const auto hi = require_column(t, "delay_max_us");
  const auto rel = require_column(t, "reliability");
  std::vector<const std::vector<std::string>*> rows;
  for (const auto& r : t.rows) {
    if (!r[f].empty()) rows.push_back(&r);
  }
  if (rows.empty()) throw PlotDataError("fig3 needs the CC frequency sweep, but no result has a freq_hz value");
  std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) {
    return std::make_tuple(num((*a)[h]), num((*a)[f])) < std::make_tuple(num((*b)[h]), num((*b)[f]));
  });
  std::ostringstream out;
  out << "height_m,freq_hz,delay_min_ms,delay_avg_ms,delay_max_ms,reliability,scenario_id\n";
  for (auto* r : rows) {
    out << (*r)[h] << ',' << (*r)[f] << ',' << us_to_ms((*r)[lo]) << ',' << us_to_ms((*r)[avg]) << ','
        << us_to_ms((*r)[hi]) << ',' << (*r)[rel] << ',' << (*r)[id] << '\n';
  }
  return out.str();
}

inline std::string fig4(const CsvTable& t) {
  const auto id = require_column(t, "scenario_id");
  const auto res = require_column(t, "resolution");
  const auto h = require_column(t, "height_m");
  const auto delay = require_column(t, "video_delay_avg_us");
  const auto thr = require_column(t, "throughput_avg_bps");
  std::vector<const std::vector<std::string>*> rows;
  for (const auto& r : t.rows) {
    if (!r[res].empty()) rows.push_back(&r);
  }
  if (rows.empty()) throw PlotDataError("fig4 needs the video resolution sweep, but no result has a resolution value");
  std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) {
    return std::make_tuple(pixels((*a)[res]), num((*a)[h])) < std::make_tuple(pixels((*b)[res]), num((*b)[h]));
  });
  std::ostringstream out;
  out << "resolution,height_m,delay_avg_ms,throughput_bps,scenario_id\n";
  for (auto* r : rows) {
    out << (*r)[res] << ',' << (*r)[h] << ',' << us_to_ms((*r)[delay]) << ',' << (*r)[thr] << ',' << (*r)[id] << '\n';
  }
  return out.str();
}

inline std::string fig5(const CsvTable& t, const std::filesystem::path& dir) {
  const auto id = require_column(t, "scenario_id");
  const auto res = require_column(t, "resolution");
  std::ostringstream out;
  out << "time_s,throughput_bps,segment_loss_frac,elevation_deg,scenario_id\n";
  std::size_t series = 0;
  for (const auto& r : t.rows) {
    if (r[res].empty()) continue;
    const auto path = dir / "members" / r[id] / "windows.csv";
    if (!std::filesystem::exists(path)) continue;
    const auto w = read_csv(path);
    const auto ts = require_column(w, "time_s");
    const auto thr = require_column(w, "throughput_bps");
    const auto loss = require_column(w, "segment_loss_frac");
    const auto elev = require_column(w, "elevation_deg");
    for (const auto& row : w.rows) {
      out << row[ts] << ',' << row[thr] << ',' << row[loss] << ',' << row[elev] << ',' << r[id] << '\n';
    }
    ++series;
  }
  if (series == 0) throw PlotDataError("fig5 needs a video time series, but no result has a windows.csv");
  return out.str();
}

}  // namespace detail

// Reads a results directory written by run/sweep and writes <out>/<kind>.csv.
// Returns the written path.
inline std::filesystem::path emit_plotdata(const std::filesystem::path& results_dir, PlotKind kind,
                                           std::optional<std::filesystem::path> out_dir = std::nullopt) {
  const auto table = detail::load_results_table(results_dir);
  if (table.rows.empty()) throw PlotDataError("results in '" + results_dir.string() + "' are empty");
  std::string text;
  switch (kind) {
    case PlotKind::kFig3: text = detail::fig3(table); break;
    case PlotKind::kFig4: text = detail::fig4(table); break;
    case PlotKind::kFig5: text = detail::fig5(table, results_dir); break;
  }
  const auto dir = out_dir.value_or(results_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto path = dir / (to_string(kind) + ".csv");
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw OutputError("cannot write '" + path.string() + "'");
  return path;
}

}  // namespace uavlink::harness
