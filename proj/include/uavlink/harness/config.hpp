#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "uavlink/cc/receiver.hpp"
#include "uavlink/cc/stick_source.hpp"
#include "uavlink/core/error.hpp"
#include "uavlink/netem/flight_path.hpp"
#include "uavlink/netem/geometry.hpp"
#include "uavlink/netem/link_config.hpp"
#include "uavlink/video/encoder.hpp"
#include "uavlink/video/fps_controller.hpp"
#include "uavlink/world.hpp"

namespace uavlink::harness {

using json = nlohmann::json;

enum class StickKind { kConstant, kWaveform, kTrace };

struct StickConfig {
  StickKind kind = StickKind::kConstant;
  cc::StickSample constant{};
  cc::WaveformStick::Axis axes[4]{};
  std::vector<cc::StickSample> trace{};
};

struct CcScenario {
  bool enabled = true;
  std::vector<double> frequencies_hz{10.0};
  std::optional<std::uint64_t> frames;
  cc::ReceiverConfig receiver{};
  Usec drain_grace{2'000'000};
  StickConfig stick{};
};

struct VideoScenario {
  bool enabled = false;
  std::vector<video::Resolution> resolutions{video::Resolution::k1280x720};
  video::EncoderModel encoder{};
  video::FpsControllerConfig controller{};
  bool adaptive = true;
  double fixed_fps = 30.0;
  int mtu_payload = 1400;
  Usec gap_timeout{500'000};
  Usec display_latency{0};
  Usec drain_grace{2'000'000};
};

struct FlightConfig {
  netem::FlightPath path{};
  // Sweep axis; overrides the plan's height. Empty = use the plan as is.
  std::vector<double> heights_m{};
};

struct GainConfig {
  bool enabled = false;
  netem::GainCapacityModel model{};
};

struct ScenarioConfig {
  std::string scenario_id = "scenario";
  std::uint64_t seed = 1;
  Usec duration{10'000'000};
  Usec window{1'000'000};
  std::string output_dir = "results";
  netem::LinkConfig link{};
  GainConfig gain{};
  ClockSettings clocks{};
  CcScenario cc{};
  VideoScenario video{};
  FlightConfig flight{};
};

// ---------------------------------------------------------------------------
// JSON tree -> ScenarioConfig. Unknown keys are rejected so typos surface.

namespace detail {

[[noreturn]] inline void invalid(const std::string& where, const std::string& what) {
  throw ConfigError(ConfigErrorKind::kValidation, where + ": " + what);
}

class Section {
 public:
  Section(const json& node, std::string where) : node_(node), where_(std::move(where)) {
    if (!node_.is_object()) invalid(where_, "expected a section (key/value map)");
  }

  ~Section() = default;

  bool has(const std::string& key) const { return node_.contains(key); }

  const json* get(const std::string& key) {
    seen_.insert(key);
    auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const json* v = get(key)) out = convert<T>(*v, path(key));
  }

  void read_us(const std::string& key, Usec& out, double scale_to_us) {
    if (const json* v = get(key)) {
      const double d = convert<double>(*v, path(key));
      out = Usec{static_cast<std::int64_t>(std::llround(d * scale_to_us))};
    }
  }

  std::optional<Section> child(const std::string& key) {
    if (const json* v = get(key)) return Section(*v, path(key));
    return std::nullopt;
  }

  // Call once every key has been consumed.
  void finish() const {
    for (const auto& [k, v] : node_.items()) {
      if (!seen_.contains(k)) invalid(where_, "unknown key '" + k + "'");
    }
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }
  const std::string& where() const { return where_; }

  template <typename T>
  static T convert(const json& v, const std::string& where) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) invalid(where, "expected true/false");
        return v.get<bool>();
      } else if constexpr (std::is_arithmetic_v<T>) {
        if (!v.is_number()) invalid(where, "expected a number");
        if constexpr (std::is_integral_v<T>) {
          const double d = v.get<double>();
          if (d != std::floor(d)) invalid(where, "expected an integer");
          if (std::is_unsigned_v<T> && d < 0) invalid(where, "expected a non-negative integer");
          if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
          if (v.is_number_integer()) return static_cast<T>(v.get<std::int64_t>());
          return static_cast<T>(d);
        } else {
          return static_cast<T>(v.get<double>());
        }
      } else {
        if (!v.is_string()) invalid(where, "expected a string");
        return v.get<std::string>();
      }
    } catch (const json::exception& e) {
      invalid(where, e.what());
    }
  }

 private:
  const json& node_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename T>
std::vector<T> read_list(const json& v, const std::string& where) {
  std::vector<T> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(Section::convert<T>(v[i], where + "[" + std::to_string(i) + "]"));
    }
    if (out.empty()) invalid(where, "sweep list is empty");
  } else {
    out.push_back(Section::convert<T>(v, where));
  }
  return out;
}

// Reads `single` or `plural` (a list) into out; at most one may be present.
template <typename T>
void read_axis(Section& s, const std::string& single, const std::string& plural, std::vector<T>& out) {
  if (s.has(single) && s.has(plural)) invalid(s.where(), "give either '" + single + "' or '" + plural + "'");
  if (const json* v = s.get(single)) out = {Section::convert<T>(*v, s.path(single))};
  if (const json* v = s.get(plural)) out = read_list<T>(*v, s.path(plural));
}

inline void parse_link(Section s, netem::LinkConfig& link) {
  if (const json* p = s.get("profile")) {
    const auto name = Section::convert<std::string>(*p, s.path("profile"));
    if (name == "25prb") {
      link = netem::LinkConfig{};
    } else if (name == "50prb") {
      link = netem::link_50prb();
    } else {
      invalid(s.path("profile"), "unknown profile '" + name + "' (25prb|50prb)");
    }
  }
  s.read_us("base_one_way_delay_us", link.base_one_way_delay, 1.0);
  s.read("random_loss_prob", link.random_loss_prob);
  s.read("uplink_bps", link.uplink_capacity);
  s.read("downlink_bps", link.downlink_capacity);
  s.read("queue_limit_bytes", link.queue_limit_bytes);
  if (auto j = s.child("jitter")) {
    if (const json* k = j->get("kind")) {
      const auto kind = Section::convert<std::string>(*k, j->path("kind"));
      if (kind == "none") link.jitter.kind = netem::JitterKind::kNone;
      else if (kind == "truncated_normal") link.jitter.kind = netem::JitterKind::kTruncatedNormal;
      else if (kind == "uniform") link.jitter.kind = netem::JitterKind::kUniform;
      else invalid(j->path("kind"), "unknown jitter kind '" + kind + "'");
    }
    j->read_us("sigma_us", link.jitter.sigma, 1.0);
    j->read("truncate_sigmas", link.jitter.truncate_sigmas);
    j->finish();
  }
  if (auto h = s.child("height_loss")) {
    h->read("enabled", link.height_loss.enabled);
    if (const json* t = h->get("table")) {
      if (!t->is_array() || t->empty()) invalid(h->path("table"), "expected a nonempty list");
      link.height_loss.loss_by_height.clear();
      for (std::size_t i = 0; i < t->size(); ++i) {
        Section e((*t)[i], h->path("table") + "[" + std::to_string(i) + "]");
        double height = 0.0, loss = 0.0;
        if (!e.has("height_m") || !e.has("loss_prob")) invalid(e.where(), "needs height_m and loss_prob");
        e.read("height_m", height);
        e.read("loss_prob", loss);
        e.finish();
        link.height_loss.loss_by_height[height] = loss;
      }
    }
    h->finish();
  }
  if (const json* steps = s.get("uplink_steps")) {
    if (!steps->is_array()) invalid(s.path("uplink_steps"), "expected a list");
    link.uplink_steps.clear();
    for (std::size_t i = 0; i < steps->size(); ++i) {
      Section e((*steps)[i], s.path("uplink_steps") + "[" + std::to_string(i) + "]");
      netem::CapacityStep step;
      e.read_us("at_s", step.at, 1e6);
      e.read("bps", step.bits_per_s);
      e.finish();
      link.uplink_steps.push_back(step);
    }
  }
  s.finish();
}

inline void parse_gain(Section s, GainConfig& g) {
  s.read("enabled", g.enabled);
  s.read("theta_edge_deg", g.model.theta_edge_deg);
  s.read("rolloff_width_deg", g.model.rolloff_width_deg);
  s.read("cap_min_bps", g.model.cap_min);
  s.read("cap_max_bps", g.model.cap_max);
  s.finish();
}

inline void parse_clocks(Section s, ClockSettings& c) {
  Usec interval = c.ground.sync_interval;
  Usec residual = c.ground.max_residual_error;
  s.read_us("sync_interval_s", interval, 1e6);
  s.read_us("max_residual_us", residual, 1.0);
  for (auto* clock : {&c.ground, &c.uav}) {
    clock->sync_interval = interval;
    clock->max_residual_error = residual;
  }
  for (auto [key, clock] : {std::pair{"ground", &c.ground}, std::pair{"uav", &c.uav}}) {
    if (auto n = s.child(key)) {
      n->read_us("offset_us", clock->true_offset, 1.0);
      n->read("drift_ppm", clock->drift_ppm);
      n->finish();
    }
  }
  s.finish();
}

inline std::int16_t read_raw_axis(const json& v, const std::string& where) {
  const auto raw = Section::convert<std::int64_t>(v, where);
  if (raw < -32768 || raw > 32767) invalid(where, "raw stick value outside [-32768, 32767]");
  return static_cast<std::int16_t>(raw);
}

inline void parse_stick(Section s, StickConfig& st) {
  static const char* kAxes[4] = {"roll", "pitch", "yaw", "thrust"};
  if (const json* k = s.get("kind")) {
    const auto kind = Section::convert<std::string>(*k, s.path("kind"));
    if (kind == "constant") st.kind = StickKind::kConstant;
    else if (kind == "waveform") st.kind = StickKind::kWaveform;
    else if (kind == "trace") st.kind = StickKind::kTrace;
    else invalid(s.path("kind"), "unknown stick kind '" + kind + "'");
  }
  std::int16_t* constant[4] = {&st.constant.roll, &st.constant.pitch, &st.constant.yaw, &st.constant.thrust};
  for (int i = 0; i < 4; ++i) {
    const json* v = s.get(kAxes[i]);
    if (!v) continue;
    if (v->is_object()) {
      Section a(*v, s.path(kAxes[i]));
      a.read("amplitude", st.axes[i].amplitude);
      a.read("frequency_hz", st.axes[i].frequency_hz);
      a.read("phase_rad", st.axes[i].phase_rad);
      a.finish();
      if (std::abs(st.axes[i].amplitude) > 32767) invalid(a.path("amplitude"), "amplitude exceeds 32767");
    } else {
      *constant[i] = read_raw_axis(*v, s.path(kAxes[i]));
    }
  }
  if (const json* t = s.get("samples")) {
    if (!t->is_array()) invalid(s.path("samples"), "expected a list of [roll, pitch, yaw, thrust]");
    st.trace.clear();
    for (std::size_t i = 0; i < t->size(); ++i) {
      const auto& row = (*t)[i];
      const auto where = s.path("samples") + "[" + std::to_string(i) + "]";
      if (!row.is_array() || row.size() != 4) invalid(where, "expected [roll, pitch, yaw, thrust]");
      st.trace.push_back({read_raw_axis(row[0], where), read_raw_axis(row[1], where),
                          read_raw_axis(row[2], where), read_raw_axis(row[3], where)});
    }
  }
  s.finish();
  if (st.kind == StickKind::kTrace && st.trace.empty()) invalid(s.where(), "trace stick needs samples");
}

inline void parse_cc(Section s, CcScenario& cc) {
  s.read("enabled", cc.enabled);
  read_axis(s, "frequency_hz", "frequencies_hz", cc.frequencies_hz);
  if (const json* f = s.get("frames")) cc.frames = Section::convert<std::uint64_t>(*f, s.path("frames"));
  s.read_us("drain_s", cc.drain_grace, 1e6);
  if (auto r = s.child("receiver")) {
    r->read("capacity_frames", cc.receiver.capacity_frames);
    r->read_us("poll_period_us", cc.receiver.poll_period, 1.0);
    r->read_us("processing_time_us", cc.receiver.processing_time, 1.0);
    r->read_us("first_poll_us", cc.receiver.first_poll, 1.0);
    r->finish();
  }
  if (auto st = s.child("stick")) parse_stick(std::move(*st), cc.stick);
  s.finish();
}

inline video::Resolution to_resolution(const std::string& s, const std::string& where) {
  if (auto r = video::parse_resolution(s)) return *r;
  invalid(where, "unsupported resolution '" + s + "' (320x240|640x480|1280x720)");
}

inline void parse_video(Section s, VideoScenario& v) {
  s.read("enabled", v.enabled);
  std::vector<std::string> names;
  read_axis(s, "resolution", "resolutions", names);
  if (!names.empty()) {
    v.resolutions.clear();
    for (const auto& n : names) v.resolutions.push_back(to_resolution(n, s.path("resolution")));
  }
  s.read("adaptive", v.adaptive);
  s.read("fixed_fps", v.fixed_fps);
  s.read("mtu_payload", v.mtu_payload);
  s.read_us("gap_timeout_ms", v.gap_timeout, 1e3);
  s.read_us("display_latency_us", v.display_latency, 1.0);
  s.read_us("drain_s", v.drain_grace, 1e6);
  if (auto e = s.child("encoder")) {
    if (auto n = e->child("nominal_bps")) {
      for (auto r : video::kAllResolutions) n->read(video::to_string(r), v.encoder.nominal_bitrate[static_cast<std::size_t>(r)]);
      n->finish();
    }
    e->read("size_cv", v.encoder.size_jitter_cv);
    e->read("reference_fps", v.encoder.reference_fps);
    e->finish();
  }
  if (auto c = s.child("controller")) {
    c->read("min_fps", v.controller.min_fps);
    c->read("max_fps", v.controller.max_fps);
    c->read("initial_fps", v.controller.initial_fps);
    c->read("increase_step", v.controller.increase_step);
    c->read("decrease_factor", v.controller.decrease_factor);
    c->read("loss_threshold", v.controller.loss_threshold);
    c->read_us("delay_threshold_ms", v.controller.delay_threshold, 1e3);
    c->read_us("window_ms", v.controller.window, 1e3);
    c->finish();
  }
  s.finish();
}

inline netem::Position read_position(Section s) {
  netem::Position p;
  s.read("x", p.x);
  s.read("y", p.y);
  s.read("z", p.z);
  s.finish();
  return p;
}

inline void parse_flight(Section s, FlightConfig& f) {
  std::string kind = "fixed";
  s.read("kind", kind);
  if (kind == "fixed") {
    netem::FixedPosition p;
    s.read("x", p.x);
    s.read("y", p.y);
    std::vector<double> heights;
    read_axis(s, "height_m", "heights_m", heights);
    if (!heights.empty()) p.height_m = heights.front();
    if (heights.size() > 1) f.heights_m = heights;
    f.path.plan = p;
  } else if (kind == "flyover") {
    netem::FlyOver p;
    std::vector<double> heights;
    read_axis(s, "height_m", "heights_m", heights);
    if (!heights.empty()) p.height_m = heights.front();
    if (heights.size() > 1) f.heights_m = heights;
    s.read("lateral_offset_m", p.lateral_offset_m);
    s.read("speed_mps", p.speed_mps);
    s.read("start_distance_m", p.start_distance_m);
    f.path.plan = p;
  } else if (kind == "waypoints") {
    netem::WaypointPath p;
    const json* w = s.get("waypoints");
    if (!w || !w->is_array() || w->empty()) invalid(s.path("waypoints"), "expected a nonempty list");
    for (std::size_t i = 0; i < w->size(); ++i) {
      Section e((*w)[i], s.path("waypoints") + "[" + std::to_string(i) + "]");
      netem::Waypoint wp;
      e.read_us("t_s", wp.at, 1e6);
      e.read("x", wp.pos.x);
      e.read("y", wp.pos.y);
      e.read("z", wp.pos.z);
      e.finish();
      p.points.push_back(wp);
    }
    f.path.plan = p;
  } else {
    invalid(s.path("kind"), "unknown flight kind '" + kind + "' (fixed|waypoints|flyover)");
  }
  if (auto bs = s.child("bs")) f.path.bs = read_position(std::move(*bs));
  s.finish();
}

}  // namespace detail

inline void validate(const ScenarioConfig& c) {
  using detail::invalid;
  if (c.scenario_id.empty()) invalid("scenario_id", "must not be empty");
  for (char ch : c.scenario_id) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-' || ch == '.')) {
      invalid("scenario_id", "only letters, digits, '_', '-' and '.' are allowed");
    }
  }
  if (c.duration <= kZero) invalid("duration_s", "must be > 0");
  if (c.window <= kZero) invalid("window_ms", "must be > 0");
  netem::validate(c.link);
  if (c.gain.enabled) netem::validate(c.gain.model);
  if (c.cc.enabled) {
    if (c.cc.frequencies_hz.empty()) invalid("cc.frequencies_hz", "sweep list is empty");
    for (double f : c.cc.frequencies_hz) {
      if (!(f > 0.0) || !std::isfinite(f)) invalid("cc.frequency_hz", "must be > 0");
    }
    if (c.cc.frames && *c.cc.frames == 0) invalid("cc.frames", "must be > 0");
    if (c.cc.receiver.capacity_frames == 0) invalid("cc.receiver.capacity_frames", "must be > 0");
    if (c.cc.receiver.cycle() <= kZero) invalid("cc.receiver", "poll period + processing time must be > 0");
  }
  if (c.video.enabled) {
    if (c.video.resolutions.empty()) invalid("video.resolutions", "sweep list is empty");
    video::validate(c.video.encoder);
    if (c.video.adaptive) video::validate(c.video.controller);
    else if (!(c.video.fixed_fps > 0.0)) invalid("video.fixed_fps", "must be > 0");
    if (c.video.mtu_payload <= 0 || c.video.mtu_payload > 65535) invalid("video.mtu_payload", "must be in [1, 65535]");
  }
  for (double h : c.flight.heights_m) {
    if (!(h >= 0.0)) invalid("flight.heights_m", "heights must be >= 0");
  }
  netem::validate(c.flight.path);
  for (const auto* clock : {&c.clocks.ground, &c.clocks.uav}) {
    if (clock->sync_interval <= kZero) invalid("clocks.sync_interval_s", "must be > 0");
    if (clock->max_residual_error < kZero) invalid("clocks.max_residual_us", "must be >= 0");
  }
}

inline ScenarioConfig config_from_json(const json& root) {
  ScenarioConfig c;
  detail::Section s(root, "");
  s.read("scenario_id", c.scenario_id);
  s.read("seed", c.seed);
  s.read_us("duration_s", c.duration, 1e6);
  s.read_us("window_ms", c.window, 1e3);
  s.read("output_dir", c.output_dir);
  if (auto n = s.child("link")) detail::parse_link(std::move(*n), c.link);
  if (auto n = s.child("gain_model")) detail::parse_gain(std::move(*n), c.gain);
  if (auto n = s.child("clocks")) detail::parse_clocks(std::move(*n), c.clocks);
  if (auto n = s.child("cc")) detail::parse_cc(std::move(*n), c.cc);
  if (auto n = s.child("video")) detail::parse_video(std::move(*n), c.video);
  if (auto n = s.child("flight")) detail::parse_flight(std::move(*n), c.flight);
  s.finish();
  validate(c);
  return c;
}

// YAML scalars become JSON numbers/booleans unless quoted.
inline json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : n) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : n) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const auto& text = n.Scalar();
  if (n.Tag() == "!") return text;
  if (text == "true" || text == "True" || text == "yes") return true;
  if (text == "false" || text == "False" || text == "no") return false;
  {
    std::int64_t i = 0;
    std::size_t used = 0;
    try {
      i = std::stoll(text, &used);
      if (used == text.size()) return i;
    } catch (const std::exception&) {
    }
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

inline ScenarioConfig parse_config(const std::string& text, bool as_json) {
  json root;
  try {
    if (as_json) {
      root = json::parse(text);
    } else {
      root = yaml_to_json(YAML::Load(text));
      if (root.is_null()) root = json::object();
    }
  } catch (const json::parse_error& e) {
    throw ConfigError(ConfigErrorKind::kParse, std::string("parse error: ") + e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError(ConfigErrorKind::kParse, std::string("parse error: ") + e.what());
  }
  return config_from_json(root);
}

// .json files parse as JSON; anything else as the YAML key/value format.
inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::kMissingFile, "cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.extension() == ".json");
  } catch (const ConfigError& e) {
    throw ConfigError(e.kind(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// ScenarioConfig -> JSON (canonical echo; also the input of the config hash).

inline json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario_id"] = c.scenario_id;
  j["seed"] = c.seed;
  j["duration_s"] = to_seconds(c.duration);
  j["window_ms"] = static_cast<double>(c.window.count()) / 1e3;
  j["output_dir"] = c.output_dir;

  const auto& l = c.link;
  json link;
  link["base_one_way_delay_us"] = l.base_one_way_delay.count();
  const char* jk = l.jitter.kind == netem::JitterKind::kNone ? "none"
                   : l.jitter.kind == netem::JitterKind::kUniform ? "uniform"
                                                                  : "truncated_normal";
  link["jitter"] = {{"kind", jk}, {"sigma_us", l.jitter.sigma.count()}, {"truncate_sigmas", l.jitter.truncate_sigmas}};
  link["random_loss_prob"] = l.random_loss_prob;
  link["uplink_bps"] = l.uplink_capacity;
  link["downlink_bps"] = l.downlink_capacity;
  link["queue_limit_bytes"] = l.queue_limit_bytes;
  json table = json::array();
  for (const auto& [h, p] : l.height_loss.loss_by_height) table.push_back({{"height_m", h}, {"loss_prob", p}});
  link["height_loss"] = {{"enabled", l.height_loss.enabled}, {"table", table}};
  json steps = json::array();
  for (const auto& s : l.uplink_steps) steps.push_back({{"at_s", to_seconds(s.at)}, {"bps", s.bits_per_s}});
  link["uplink_steps"] = steps;
  j["link"] = link;

  j["gain_model"] = {{"enabled", c.gain.enabled},
                     {"theta_edge_deg", c.gain.model.theta_edge_deg},
                     {"rolloff_width_deg", c.gain.model.rolloff_width_deg},
                     {"cap_min_bps", c.gain.model.cap_min},
                     {"cap_max_bps", c.gain.model.cap_max}};

  j["clocks"] = {{"sync_interval_s", to_seconds(c.clocks.ground.sync_interval)},
                 {"max_residual_us", c.clocks.ground.max_residual_error.count()},
                 {"ground", {{"offset_us", c.clocks.ground.true_offset.count()}, {"drift_ppm", c.clocks.ground.drift_ppm}}},
                 {"uav", {{"offset_us", c.clocks.uav.true_offset.count()}, {"drift_ppm", c.clocks.uav.drift_ppm}}}};

  json cc;
  cc["enabled"] = c.cc.enabled;
  cc["frequencies_hz"] = c.cc.frequencies_hz;
  if (c.cc.frames) cc["frames"] = *c.cc.frames;
  cc["drain_s"] = to_seconds(c.cc.drain_grace);
  cc["receiver"] = {{"capacity_frames", c.cc.receiver.capacity_frames},
                    {"poll_period_us", c.cc.receiver.poll_period.count()},
                    {"processing_time_us", c.cc.receiver.processing_time.count()},
                    {"first_poll_us", c.cc.receiver.first_poll.count()}};
  json stick;
  static const char* kAxes[4] = {"roll", "pitch", "yaw", "thrust"};
  switch (c.cc.stick.kind) {
    case StickKind::kConstant: {
      stick["kind"] = "constant";
      const std::int16_t vals[4] = {c.cc.stick.constant.roll, c.cc.stick.constant.pitch, c.cc.stick.constant.yaw,
                                    c.cc.stick.constant.thrust};
      for (int i = 0; i < 4; ++i) stick[kAxes[i]] = vals[i];
      break;
    }
    case StickKind::kWaveform:
      stick["kind"] = "waveform";
      for (int i = 0; i < 4; ++i) {
        stick[kAxes[i]] = {{"amplitude", c.cc.stick.axes[i].amplitude},
                           {"frequency_hz", c.cc.stick.axes[i].frequency_hz},
                           {"phase_rad", c.cc.stick.axes[i].phase_rad}};
      }
      break;
    case StickKind::kTrace: {
      stick["kind"] = "trace";
      json samples = json::array();
      for (const auto& s : c.cc.stick.trace) samples.push_back({s.roll, s.pitch, s.yaw, s.thrust});
      stick["samples"] = samples;
      break;
    }
  }
  cc["stick"] = stick;
  j["cc"] = cc;

  json v;
  v["enabled"] = c.video.enabled;
  json res = json::array();
  for (auto r : c.video.resolutions) res.push_back(video::to_string(r));
  v["resolutions"] = res;
  v["adaptive"] = c.video.adaptive;
  v["fixed_fps"] = c.video.fixed_fps;
  v["mtu_payload"] = c.video.mtu_payload;
  v["gap_timeout_ms"] = static_cast<double>(c.video.gap_timeout.count()) / 1e3;
  v["display_latency_us"] = c.video.display_latency.count();
  v["drain_s"] = to_seconds(c.video.drain_grace);
  json nominal;
  for (auto r : video::kAllResolutions) nominal[video::to_string(r)] = c.video.encoder.nominal_for(r);
  v["encoder"] = {{"nominal_bps", nominal},
                  {"size_cv", c.video.encoder.size_jitter_cv},
                  {"reference_fps", c.video.encoder.reference_fps}};
  const auto& ctl = c.video.controller;
  v["controller"] = {{"min_fps", ctl.min_fps},
                     {"max_fps", ctl.max_fps},
                     {"initial_fps", ctl.initial_fps},
                     {"increase_step", ctl.increase_step},
                     {"decrease_factor", ctl.decrease_factor},
                     {"loss_threshold", ctl.loss_threshold},
                     {"delay_threshold_ms", static_cast<double>(ctl.delay_threshold.count()) / 1e3},
                     {"window_ms", static_cast<double>(ctl.window.count()) / 1e3}};
  j["video"] = v;

  json f;
  std::visit(
      [&f](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, netem::FixedPosition>) {
          f["kind"] = "fixed";
          f["height_m"] = p.height_m;
          f["x"] = p.x;
          f["y"] = p.y;
        } else if constexpr (std::is_same_v<T, netem::FlyOver>) {
          f["kind"] = "flyover";
          f["height_m"] = p.height_m;
          f["lateral_offset_m"] = p.lateral_offset_m;
          f["speed_mps"] = p.speed_mps;
          f["start_distance_m"] = p.start_distance_m;
        } else {
          f["kind"] = "waypoints";
          json w = json::array();
          for (const auto& wp : p.points) {
            w.push_back({{"t_s", to_seconds(wp.at)}, {"x", wp.pos.x}, {"y", wp.pos.y}, {"z", wp.pos.z}});
          }
          f["waypoints"] = w;
        }
      },
      c.flight.path.plan);
  if (!c.flight.heights_m.empty()) {
    f.erase("height_m");
    f["heights_m"] = c.flight.heights_m;
  }
  f["bs"] = {{"x", c.flight.path.bs.x}, {"y", c.flight.path.bs.y}, {"z", c.flight.path.bs.z}};
  j["flight"] = f;
  return j;
}

// 64-bit FNV-1a over the canonical JSON echo.
inline std::uint64_t config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace uavlink::harness
