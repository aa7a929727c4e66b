#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "forager/config.hpp"

namespace forager {

namespace config_io {

using nlohmann::json;

inline const char* mode_name(ObservationMode m) {
  switch (m) {
    case ObservationMode::BinaryChannels: return "binary";
    case ObservationMode::ColorOneHot: return "color";
    case ObservationMode::Rgb: return "rgb";
  }
  return "?";
}

inline json to_json(Position p) { return json::array({p.x, p.y}); }
inline json to_json(Rgb c) { return json::array({c.r, c.g, c.b}); }
inline json to_json(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

inline json to_json(const FourierParams& p) {
  return {{"a", p.a}, {"b", p.b}, {"period", p.period}, {"repeat", p.repeat}};
}

inline json to_json(const FourierSampling& s) {
  return {{"harmonics", s.harmonics}, {"repeat", s.repeat}, {"period_min", s.period_min}, {"period_max", s.period_max}};
}

inline json schedule_to_json(const ScheduleSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, StaticRewards>) {
          return {{"kind", "static"}, {"rewards", s.rewards}};
        } else if constexpr (std::is_same_v<S, DecayingRewards>) {
          return {{"kind", "decaying"}, {"initial", s.initial}, {"decay", s.decay}, {"floor", s.floor}};
        } else if constexpr (std::is_same_v<S, SwitchingRewards>) {
          return {{"kind", "switching"}, {"period", s.period}, {"phases", s.phases}};
        } else {
          json series = json::array();
          for (const auto& p : s.series) series.push_back(to_json(p));
          return {{"kind", "fourier"},
                  {"series", series},
                  {"center", s.center},
                  {"extinction_threshold", s.extinction_threshold},
                  {"replacement", to_json(s.replacement)}};
        }
      },
      spec);
}

inline json species_to_json(const SpeciesSpec& s, const TaskConfig& c) {
  json spawn;
  switch (s.spawn.kind) {
    case SpawnRule::Kind::Density: spawn = {{"kind", "density"}, {"p", s.spawn.density}}; break;
    case SpawnRule::Kind::Count: spawn = {{"kind", "count"}, {"n", s.spawn.count}}; break;
    case SpawnRule::Kind::Explicit: {
      json cells = json::array();
      for (const auto& p : s.spawn.cells) cells.push_back(to_json(p));
      spawn = {{"kind", "explicit"}, {"cells", cells}};
      break;
    }
  }
  json respawn;
  const char* placement = s.respawn.placement == Placement::Original ? "original" : "random";
  switch (s.respawn.kind) {
    case RespawnRule::Kind::Never: respawn = {{"kind", "never"}}; break;
    case RespawnRule::Kind::FixedDelay:
      respawn = {{"kind", "fixed"}, {"delay", s.respawn.min_delay}, {"placement", placement}};
      break;
    case RespawnRule::Kind::UniformDelay:
      respawn = {{"kind", "uniform"}, {"min", s.respawn.min_delay}, {"max", s.respawn.max_delay}, {"placement", placement}};
      break;
  }
  return {{"name", s.name},
          {"color", to_json(s.color)},
          {"biome", s.biome ? json(c.biomes.at(*s.biome).name) : json(nullptr)},
          {"spawn", spawn},
          {"respawn", respawn}};
}

/// Canonical document: object keys sorted, so equal configs serialize to
/// identical text.
inline json to_document(const TaskConfig& c) {
  json doc;
  doc["forager_config_version"] = kConfigVersion;
  doc["world"] = {{"width", c.world.width}, {"height", c.world.height}, {"wrap", c.wrap}};
  doc["agent"] = {{"start", c.agent_start ? to_json(*c.agent_start) : json(nullptr)}};
  json walls = json::array();
  for (const auto& w : c.walls) walls.push_back(to_json(w));
  doc["walls"] = walls;
  json biomes = json::array();
  for (const auto& b : c.biomes) biomes.push_back({{"name", b.name}, {"region", to_json(b.region)}});
  doc["biomes"] = biomes;
  json species = json::array();
  for (const auto& s : c.species) species.push_back(species_to_json(s, c));
  doc["species"] = species;
  doc["schedule"] = schedule_to_json(c.schedule);
  if (c.cue) {
    doc["cue"] = {{"period", c.cue->period},
                  {"duration", c.cue->duration},
                  {"mode", c.cue->mode == CueMode::Always ? "always" : "windowed"}};
  } else {
    doc["cue"] = nullptr;
  }
  const auto& o = c.observation;
  doc["observation"] = {{"fov", o.fov},
                        {"mode", mode_name(o.mode)},
                        {"last_action", o.include_last_action},
                        {"last_reward", o.include_last_reward},
                        {"reward_trace", o.reward_trace ? json(*o.reward_trace) : json(nullptr)},
                        {"cue", o.include_cue}};
  doc["seed"] = c.seed;
  return doc;
}

inline std::string serialize_config(const TaskConfig& c) { return to_document(c).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Parsing. Errors carry a JSON-pointer style location.

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError((path_.empty() ? std::string("/") : path_) + ": " + msg);
  }

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  void require_object(std::initializer_list<std::string_view> allowed) const {
    if (!node_.is_object()) fail("expected an object");
    for (const auto& [key, _] : node_.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) Reader(node_[key], path_ + "/" + key).fail("unknown key");
    }
  }

  Reader operator[](std::string_view key) const {
    const std::string k(key);
    if (!node_.contains(k)) fail("missing key '" + k + "'");
    return Reader(node_.at(k), path_ + "/" + k);
  }

  bool has(std::string_view key) const { return node_.contains(std::string(key)) && !node_.at(std::string(key)).is_null(); }
  bool is_null() const { return node_.is_null(); }

  Reader item(std::size_t i) const { return Reader(node_.at(i), path_ + "/" + std::to_string(i)); }
  std::size_t size() const {
    if (!node_.is_array()) fail("expected an array");
    return node_.size();
  }

  std::int64_t as_int() const {
    if (!node_.is_number_integer()) fail("expected an integer");
    return node_.get<std::int64_t>();
  }
  std::uint64_t as_uint() const {
    if (!node_.is_number_unsigned()) fail("expected a non-negative integer");
    return node_.get<std::uint64_t>();
  }
  int as_int32() const {
    const auto v = as_int();
    if (v < INT32_MIN || v > INT32_MAX) fail("integer out of range");
    return static_cast<int>(v);
  }
  double as_double() const {
    if (!node_.is_number()) fail("expected a number");
    return node_.get<double>();
  }
  bool as_bool() const {
    if (!node_.is_boolean()) fail("expected a boolean");
    return node_.get<bool>();
  }
  std::string as_string() const {
    if (!node_.is_string()) fail("expected a string");
    return node_.get<std::string>();
  }

  std::vector<double> as_doubles() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).as_double());
    return out;
  }

  Position as_position() const {
    if (size() != 2) fail("expected [x, y]");
    return {item(0).as_int32(), item(1).as_int32()};
  }

  Rgb as_rgb() const {
    if (size() != 3) fail("expected [r, g, b]");
    Rgb c;
    std::uint8_t* parts[3] = {&c.r, &c.g, &c.b};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto v = item(i).as_int();
      if (v < 0 || v > 255) item(i).fail("color component must be in [0, 255]");
      *parts[i] = static_cast<std::uint8_t>(v);
    }
    return c;
  }

  Rect as_rect() const {
    if (size() != 4) fail("expected [x0, y0, x1, y1]");
    return {item(0).as_int32(), item(1).as_int32(), item(2).as_int32(), item(3).as_int32()};
  }

 private:
  const json& node_;
  std::string path_;
};

inline Placement parse_placement(const Reader& r) {
  const auto s = r.as_string();
  if (s == "original") return Placement::Original;
  if (s == "random") return Placement::RandomInRegion;
  r.fail("placement must be 'original' or 'random'");
}

inline FourierParams parse_fourier(const Reader& r) {
  r.require_object({"a", "b", "period", "repeat"});
  return {r["a"].as_doubles(), r["b"].as_doubles(), r["period"].as_double(), r["repeat"].as_int()};
}

inline ScheduleSpec parse_schedule(const Reader& r) {
  if (!r.node().is_object()) r.fail("expected an object");
  const auto kind = r["kind"].as_string();
  if (kind == "static") {
    r.require_object({"kind", "rewards"});
    return StaticRewards{r["rewards"].as_doubles()};
  }
  if (kind == "decaying") {
    r.require_object({"kind", "initial", "decay", "floor"});
    return DecayingRewards{r["initial"].as_doubles(), r["decay"].as_double(), r["floor"].as_double()};
  }
  if (kind == "switching") {
    r.require_object({"kind", "period", "phases"});
    SwitchingRewards s;
    s.period = r["period"].as_int();
    const Reader phases = r["phases"];
    for (std::size_t i = 0; i < phases.size(); ++i) s.phases.push_back(phases.item(i).as_doubles());
    return s;
  }
  if (kind == "fourier") {
    r.require_object({"kind", "series", "center", "extinction_threshold", "replacement"});
    FourierRewards f;
    const Reader series = r["series"];
    for (std::size_t i = 0; i < series.size(); ++i) f.series.push_back(parse_fourier(series.item(i)));
    f.center = r["center"].as_bool();
    f.extinction_threshold = r["extinction_threshold"].as_int();
    const Reader rep = r["replacement"];
    rep.require_object({"harmonics", "repeat", "period_min", "period_max"});
    f.replacement = {rep["harmonics"].as_int32(), rep["repeat"].as_int(), rep["period_min"].as_double(),
                     rep["period_max"].as_double()};
    return f;
  }
  r["kind"].fail("unknown schedule kind '" + kind + "'");
}

inline SpeciesSpec parse_species(const Reader& r, const TaskConfig& c) {
  r.require_object({"name", "color", "biome", "spawn", "respawn"});
  SpeciesSpec s;
  s.name = r["name"].as_string();
  s.color = r["color"].as_rgb();
  if (r.has("biome")) {
    const Reader b = r["biome"];
    const auto name = b.as_string();
    auto it = std::find_if(c.biomes.begin(), c.biomes.end(), [&](const BiomeSpec& x) { return x.name == name; });
    if (it == c.biomes.end()) b.fail("unknown biome '" + name + "'");
    s.biome = static_cast<std::size_t>(it - c.biomes.begin());
  } else if (!r.node().contains("biome")) {
    r.fail("missing key 'biome'");
  }

  const Reader spawn = r["spawn"];
  if (!spawn.node().is_object()) spawn.fail("expected an object");
  const auto sk = spawn["kind"].as_string();
  if (sk == "density") {
    spawn.require_object({"kind", "p"});
    s.spawn = SpawnRule::with_density(spawn["p"].as_double());
  } else if (sk == "count") {
    spawn.require_object({"kind", "n"});
    s.spawn = SpawnRule::with_count(spawn["n"].as_int32());
  } else if (sk == "explicit") {
    spawn.require_object({"kind", "cells"});
    const Reader cells = spawn["cells"];
    std::vector<Position> ps;
    for (std::size_t i = 0; i < cells.size(); ++i) ps.push_back(cells.item(i).as_position());
    s.spawn = SpawnRule::at(std::move(ps));
  } else {
    spawn["kind"].fail("unknown spawn kind '" + sk + "'");
  }

  const Reader respawn = r["respawn"];
  if (!respawn.node().is_object()) respawn.fail("expected an object");
  const auto rk = respawn["kind"].as_string();
  if (rk == "never") {
    respawn.require_object({"kind"});
    s.respawn = RespawnRule::never();
  } else if (rk == "fixed") {
    respawn.require_object({"kind", "delay", "placement"});
    s.respawn = RespawnRule::fixed(respawn["delay"].as_int32(), parse_placement(respawn["placement"]));
  } else if (rk == "uniform") {
    respawn.require_object({"kind", "min", "max", "placement"});
    s.respawn = RespawnRule::uniform(respawn["min"].as_int32(), respawn["max"].as_int32(),
                                     parse_placement(respawn["placement"]));
  } else {
    respawn["kind"].fail("unknown respawn kind '" + rk + "'");
  }
  return s;
}

inline ObservationMode parse_mode(const Reader& r) {
  const auto s = r.as_string();
  if (s == "binary") return ObservationMode::BinaryChannels;
  if (s == "color") return ObservationMode::ColorOneHot;
  if (s == "rgb") return ObservationMode::Rgb;
  r.fail("mode must be 'binary', 'color' or 'rgb'");
}

inline TaskConfig from_document(const json& doc) {
  const Reader root(doc, "");
  root.require_object({"forager_config_version", "world", "agent", "walls", "biomes", "species", "schedule", "cue",
                       "observation", "seed"});
  if (root["forager_config_version"].as_int() != kConfigVersion) {
    root["forager_config_version"].fail("unsupported version");
  }
  TaskConfig c;
  const Reader world = root["world"];
  world.require_object({"width", "height", "wrap"});
  c.world = {world["width"].as_int32(), world["height"].as_int32()};
  c.wrap = world["wrap"].as_bool();

  const Reader agent = root["agent"];
  agent.require_object({"start"});
  if (agent.has("start")) c.agent_start = agent["start"].as_position();

  const Reader walls = root["walls"];
  for (std::size_t i = 0; i < walls.size(); ++i) c.walls.push_back(walls.item(i).as_position());

  const Reader biomes = root["biomes"];
  for (std::size_t i = 0; i < biomes.size(); ++i) {
    const Reader b = biomes.item(i);
    b.require_object({"name", "region"});
    c.biomes.push_back({b["name"].as_string(), b["region"].as_rect()});
  }

  const Reader species = root["species"];
  for (std::size_t i = 0; i < species.size(); ++i) c.species.push_back(parse_species(species.item(i), c));

  c.schedule = parse_schedule(root["schedule"]);

  const Reader cue = root["cue"];
  if (!cue.is_null()) {
    cue.require_object({"period", "duration", "mode"});
    CueConfig cc;
    cc.period = cue["period"].as_int();
    cc.duration = cue["duration"].as_int();
    const auto mode = cue["mode"].as_string();
    if (mode == "always") {
      cc.mode = CueMode::Always;
    } else if (mode == "windowed") {
      cc.mode = CueMode::Windowed;
    } else {
      cue["mode"].fail("mode must be 'windowed' or 'always'");
    }
    c.cue = cc;
  }

  const Reader obs = root["observation"];
  obs.require_object({"fov", "mode", "last_action", "last_reward", "reward_trace", "cue"});
  c.observation.fov = obs["fov"].as_int32();
  c.observation.mode = parse_mode(obs["mode"]);
  c.observation.include_last_action = obs["last_action"].as_bool();
  c.observation.include_last_reward = obs["last_reward"].as_bool();
  if (obs.has("reward_trace")) c.observation.reward_trace = obs["reward_trace"].as_double();
  c.observation.include_cue = obs["cue"].as_bool();

  c.seed = root["seed"].as_uint();
  return c;
}

}  // namespace config_io

/// Parses and validates a config document.
inline TaskConfig parse_config(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  TaskConfig c = config_io::from_document(doc);
  validate(c);
  return c;
}

inline std::string serialize_config(const TaskConfig& c) { return config_io::serialize_config(c); }

inline TaskConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace forager
