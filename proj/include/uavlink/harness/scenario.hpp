#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "uavlink/cc/session.hpp"
#include "uavlink/harness/config.hpp"
#include "uavlink/harness/csv.hpp"
#include "uavlink/metrics/cc_stats.hpp"
#include "uavlink/metrics/video_stats.hpp"
#include "uavlink/netem/geometry.hpp"
#include "uavlink/sim/rng.hpp"
#include "uavlink/video/session.hpp"

namespace uavlink::harness {

inline constexpr const char* kVersion = "0.1.0";

// One point of the sweep cross product, with every axis single-valued.
struct Member {
  std::size_t index = 0;
  std::string id;
  std::uint64_t seed = 0;
  std::optional<double> freq_hz;
  double height_m = 0.0;
  std::optional<video::Resolution> resolution;
  ScenarioConfig config;
};

struct WindowRow {
  Usec start{};
  double throughput_bps = 0.0;
  double segment_loss = 0.0;
  double elevation_deg = 0.0;
  double capacity_bps = 0.0;
};

struct MemberResult {
  Member member;
  std::optional<cc::CcSessionResult> cc;
  std::optional<metrics::CcStats> cc_stats;
  std::optional<video::VideoLog> video;
  std::optional<metrics::VideoStats> video_stats;
  // Segments delivered by netem whose arrival falls after the cut-off.
  std::uint64_t video_residue = 0;
  std::vector<WindowRow> windows;
};

struct ResultSet {
  ScenarioConfig config;
  std::uint64_t config_hash = 0;
  std::string version = kVersion;
  std::vector<MemberResult> members;
};

namespace detail {

inline void set_height(netem::FlightPath& fp, double h) {
  std::visit(
      [h](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (!std::is_same_v<T, netem::WaypointPath>) p.height_m = h;
      },
      fp.plan);
}

inline std::unique_ptr<cc::StickSource> make_stick(const StickConfig& s) {
  switch (s.kind) {
    case StickKind::kWaveform:
      return std::make_unique<cc::WaveformStick>(s.axes[0], s.axes[1], s.axes[2], s.axes[3]);
    case StickKind::kTrace:
      return std::make_unique<cc::TraceStick>(s.trace);
    case StickKind::kConstant:
      break;
  }
  return std::make_unique<cc::ConstantStick>(s.constant);
}

// Maximum elevation over [start, start + width), sampled every 100 ms.
inline double window_elevation(const netem::FlightPath& fp, Usec start, Usec width) {
  double best = 0.0;
  const int n = std::max<int>(1, static_cast<int>(width.count() / 100'000));
  for (int i = 0; i < n; ++i) {
    const Usec t = start + Usec{width.count() * i / n};
    best = std::max(best, netem::elevation_angle(fp.at(t)));
  }
  return best;
}

}  // namespace detail

// Cross product heights x frequencies x resolutions, in that nesting order.
// Axes of disabled subsystems collapse to a single unlabeled point.
inline std::vector<Member> expand(const ScenarioConfig& cfg) {
  validate(cfg);
  std::vector<double> heights = cfg.flight.heights_m;
  if (heights.empty()) heights = {cfg.flight.path.nominal_height()};
  std::vector<std::optional<double>> freqs;
  if (cfg.cc.enabled) {
    for (double f : cfg.cc.frequencies_hz) freqs.emplace_back(f);
  } else {
    freqs.emplace_back(std::nullopt);
  }
  std::vector<std::optional<video::Resolution>> resolutions;
  if (cfg.video.enabled) {
    for (auto r : cfg.video.resolutions) resolutions.emplace_back(r);
  } else {
    resolutions.emplace_back(std::nullopt);
  }

  std::vector<Member> out;
  for (double h : heights) {
    for (const auto& f : freqs) {
      for (const auto& r : resolutions) {
        Member m;
        m.index = out.size();
        m.seed = sim::mix_seed(cfg.seed, m.index);
        m.freq_hz = f;
        m.height_m = h;
        m.resolution = r;
        m.id = cfg.scenario_id + "_h" + fmt_label(h);
        if (f) m.id += "_f" + fmt_label(*f);
        if (r) m.id += "_r" + video::to_string(*r);
        m.config = cfg;
        m.config.seed = m.seed;
        m.config.flight.heights_m.clear();
        detail::set_height(m.config.flight.path, h);
        if (f) m.config.cc.frequencies_hz = {*f};
        if (r) m.config.video.resolutions = {*r};
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

// Runs one member in a fresh world. CC and video share the world (and so
// the clocks and flight path) but draw from separate RNG streams.
inline MemberResult run_member(const Member& m) {
  const auto& c = m.config;
  MemberResult r;
  r.member = m;
  World world(m.seed, c.clocks, c.flight.path);

  std::unique_ptr<cc::CcLink> cc_link;
  if (m.freq_hz) {
    cc::CcSessionConfig cs;
    cs.sender.send_frequency_hz = *m.freq_hz;
    cs.sender.max_frames = c.cc.frames;
    cs.receiver = c.cc.receiver;
    cs.duration = c.cc.frames ? grid_instant(static_cast<std::int64_t>(*c.cc.frames), *m.freq_hz) : c.duration;
    cs.drain_grace = c.cc.drain_grace;
    cc_link = std::make_unique<cc::CcLink>(world, c.link, cs, detail::make_stick(c.cc.stick));
  }

  std::unique_ptr<video::VideoLink> video_link;
  if (m.resolution) {
    video::VideoSessionConfig vs;
    vs.resolution = *m.resolution;
    vs.encoder = c.video.encoder;
    vs.controller = c.video.controller;
    vs.adaptive = c.video.adaptive;
    vs.fixed_fps = c.video.fixed_fps;
    vs.mtu_payload = c.video.mtu_payload;
    vs.gap_timeout = c.video.gap_timeout;
    vs.display_latency = c.video.display_latency;
    vs.duration = c.duration;
    vs.drain_grace = c.video.drain_grace;
    std::optional<netem::GainCapacityModel> gain;
    if (c.gain.enabled) gain = c.gain.model;
    video_link = std::make_unique<video::VideoLink>(world, c.link, gain, vs);
  }

  Usec end{0};
  if (cc_link) {
    cc_link->start();
    end = std::max(end, cc_link->cutoff());
  }
  if (video_link) {
    video_link->start();
    end = std::max(end, video_link->cutoff());
  }
  world.sim().run_until(end);

  if (cc_link) {
    r.cc = cc_link->collect();
    r.cc_stats = metrics::cc_stats(r.cc->tx, r.cc->rx);
  }
  if (video_link) {
    r.video = video_link->collect();
    r.video_stats = metrics::video_stats(*r.video, c.window);
    for (const auto& seg : r.video->segments) {
      if (seg.arrival_true && *seg.arrival_true > video_link->cutoff()) ++r.video_residue;
    }
    const auto& vst = *r.video_stats;
    for (std::size_t i = 0; i < vst.window_throughput_bps.size(); ++i) {
      WindowRow w;
      w.start = Usec{static_cast<std::int64_t>(i) * c.window.count()};
      w.throughput_bps = vst.window_throughput_bps[i];
      w.segment_loss = vst.window_segment_loss[i];
      w.elevation_deg = detail::window_elevation(c.flight.path, w.start, c.window);
      const Usec mid = w.start + c.window / 2;
      w.capacity_bps = video_link->path().capacity_at(mid, c.flight.path.at(mid));
      r.windows.push_back(w);
    }
  }
  return r;
}

// Runs every member. threads > 1 runs members concurrently; results are
// stored by member index, so output never depends on scheduling.
inline ResultSet run_members(const ScenarioConfig& cfg, unsigned threads = 1) {
  ResultSet rs;
  rs.config = cfg;
  rs.config_hash = config_hash(cfg);
  const auto members = expand(cfg);
  rs.members.resize(members.size());
  auto run_one = [&](std::size_t i) {
    try {
      rs.members[i] = run_member(members[i]);
    } catch (const Error& e) {
      throw Error("run '" + members[i].id + "' failed: " + e.what());
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(members.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < members.size(); ++i) run_one(i);
    return rs;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < members.size() && !failed; i = next++) {
        try {
          run_one(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!first_error) first_error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rs;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::vector<std::string> results_header() {
  return {"scenario_id",       "freq_hz",           "height_m",          "resolution",
          "delay_min_us",      "delay_avg_us",      "delay_max_us",      "reliability",
          "throughput_avg_bps", "segment_loss_frac", "seed",             "config_hash",
          "cc_sent",           "cc_received",       "cc_net_dropped",    "cc_overflow_drops",
          "cc_residue",        "video_delay_min_us", "video_delay_avg_us", "video_delay_max_us",
          "video_frames",      "video_frames_completed", "segments_sent", "segments_delivered",
          "segments_dropped",  "segments_residue"};
}

inline std::vector<std::string> results_row(const MemberResult& r, std::uint64_t hash) {
  const auto& m = r.member;
  std::vector<std::string> row;
  row.push_back(m.id);
  row.push_back(m.freq_hz ? fmt_label(*m.freq_hz) : "");
  row.push_back(fmt_label(m.height_m));
  row.push_back(m.resolution ? video::to_string(*m.resolution) : "");

  std::optional<metrics::Summary> delay;
  if (r.cc_stats) delay = r.cc_stats->delay;
  else if (r.video_stats) delay = r.video_stats->delay;
  for (double v : {delay ? delay->min : NAN, delay ? delay->avg : NAN, delay ? delay->max : NAN}) {
    row.push_back(fmt_fixed(v, 1));
  }
  row.push_back(r.cc_stats ? fmt_fixed(r.cc_stats->reliability, 6) : "");
  row.push_back(r.video_stats ? fmt_fixed(r.video_stats->aggregate_throughput_bps, 1) : "");
  row.push_back(r.video_stats ? fmt_fixed(r.video_stats->segment_loss_fraction(), 6) : "");
  row.push_back(std::to_string(m.seed));
  row.push_back(fmt_hex64(hash));

  if (r.cc) {
    const auto& p = r.cc->path;
    row.push_back(std::to_string(r.cc->tx.size()));
    row.push_back(std::to_string(r.cc->rx.size()));
    row.push_back(std::to_string(p.dropped_random + p.dropped_queue));
    row.push_back(std::to_string(r.cc->receiver.overflow_drops));
    row.push_back(std::to_string(r.cc->residue_in_flight + r.cc->residue_in_buffer));
  } else {
    row.insert(row.end(), 5, "");
  }
  if (r.video_stats) {
    const auto& vs = *r.video_stats;
    for (double v : {vs.delay ? vs.delay->min : NAN, vs.delay ? vs.delay->avg : NAN, vs.delay ? vs.delay->max : NAN}) {
      row.push_back(fmt_fixed(v, 1));
    }
    const auto& p = r.video->path;
    row.push_back(std::to_string(vs.frames_total));
    row.push_back(std::to_string(vs.frames_completed));
    row.push_back(std::to_string(p.sent));
    row.push_back(std::to_string(p.delivered - r.video_residue));
    row.push_back(std::to_string(p.dropped_random + p.dropped_queue));
    row.push_back(std::to_string(r.video_residue));
  } else {
    row.insert(row.end(), 9, "");
  }
  return row;
}

inline void write_results_table(const ResultSet& rs, const std::filesystem::path& path) {
  CsvWriter w(path);
  w.row(results_header());
  for (const auto& r : rs.members) w.row(results_row(r, rs.config_hash));
  w.close();
}

inline void write_member_logs(const MemberResult& r, std::uint64_t hash, const std::filesystem::path& dir) {
  const std::vector<std::string> trace{r.member.id, std::to_string(r.member.seed), fmt_hex64(hash)};
  auto with_trace = [&trace](std::vector<std::string> row) {
    row.insert(row.end(), trace.begin(), trace.end());
    return row;
  };
  if (r.cc) {
    CsvWriter w(dir / "cc_log.csv");
    w.row({"frame_id", "timestamp_us", "side", "scenario_id", "seed", "config_hash"});
    for (const auto& e : r.cc->tx) w.row(with_trace({std::to_string(e.frame_id), std::to_string(e.timestamp.count()), "tx"}));
    for (const auto& e : r.cc->rx) w.row(with_trace({std::to_string(e.frame_id), std::to_string(e.timestamp.count()), "rx"}));
    w.close();
  }
  if (r.video) {
    CsvWriter w(dir / "video_log.csv");
    w.row({"frame_seq", "t_vt_us", "t_vr_us", "size_bits", "segs_sent", "segs_lost", "fps_at_capture", "scenario_id",
           "seed", "config_hash"});
    for (const auto& f : r.video->frames) {
      w.row(with_trace({std::to_string(f.frame_seq), std::to_string(f.t_vt.count()),
                        f.t_vr ? std::to_string(f.t_vr->count()) : "", std::to_string(f.size_bits),
                        std::to_string(f.segments_sent), std::to_string(f.segments_lost), fmt_fixed(f.fps_at_capture, 3)}));
    }
    w.close();

    CsvWriter ww(dir / "windows.csv");
    ww.row({"time_s", "throughput_bps", "segment_loss_frac", "elevation_deg", "capacity_bps", "scenario_id", "seed",
            "config_hash"});
    for (const auto& win : r.windows) {
      ww.row(with_trace({fmt_fixed(to_seconds(win.start), 3), fmt_fixed(win.throughput_bps, 1),
                         fmt_fixed(win.segment_loss, 6), fmt_fixed(win.elevation_deg, 3), fmt_fixed(win.capacity_bps, 1)}));
    }
    ww.close();
  }
}

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw OutputError("cannot create output directory '" + dir.string() + "'" + (ec ? ": " + ec.message() : ""));
  }
}

// Layout:
//   <dir>/<table_name>            one row per member
//   <dir>/config.json             canonical config echo plus run metadata
//   <dir>/members/<id>/*.csv      per-member logs and window series
inline void write_results(const ResultSet& rs, const std::filesystem::path& dir, const std::string& table_name) {
  ensure_dir(dir);
  write_results_table(rs, dir / table_name);
  {
    json meta = to_json(rs.config);
    meta["run"] = {{"version", rs.version}, {"config_hash", fmt_hex64(rs.config_hash)}, {"members", rs.members.size()}};
    std::ofstream out(dir / "config.json", std::ios::binary);
    out << meta.dump(2) << '\n';
    if (!out) throw OutputError("cannot write '" + (dir / "config.json").string() + "'");
  }
  for (const auto& r : rs.members) {
    const auto sub = dir / "members" / r.member.id;
    ensure_dir(sub);
    write_member_logs(r, rs.config_hash, sub);
  }
}

// Runs every combination in order and writes results.csv.
inline ResultSet run_scenario(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = std::nullopt) {
  auto rs = run_members(cfg, 1);
  if (out) write_results(rs, *out, "results.csv");
  return rs;
}

// Same runs, members in parallel, summary.csv as the table.
inline ResultSet sweep(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out = std::nullopt,
                       unsigned threads = std::thread::hardware_concurrency()) {
  auto rs = run_members(cfg, threads == 0 ? 1 : threads);
  if (out) write_results(rs, *out, "summary.csv");
  return rs;
}

}  // namespace uavlink::harness
