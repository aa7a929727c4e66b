#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "forager/geometry.hpp"
#include "forager/reward.hpp"

namespace forager {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

namespace colors {
inline constexpr Rgb kBackground{255, 255, 255};
inline constexpr Rgb kWall{0, 0, 0};
inline constexpr Rgb kAgent{0, 0, 255};
inline constexpr Rgb kFovOverlay{173, 216, 230};
}  // namespace colors

enum class ObservationMode { BinaryChannels, ColorOneHot, Rgb };

struct ObservationSpec {
  int fov = 11;
  ObservationMode mode = ObservationMode::BinaryChannels;
  bool include_last_action = false;
  bool include_last_reward = false;
  /// Decay of the exponentially weighted reward trace, in (0, 1).
  std::optional<double> reward_trace;
  bool include_cue = false;
  friend bool operator==(const ObservationSpec&, const ObservationSpec&) = default;
};

struct BiomeSpec {
  std::string name;
  Rect region;
  friend bool operator==(const BiomeSpec&, const BiomeSpec&) = default;
};

struct SpawnRule {
  enum class Kind { Density, Count, Explicit };
  Kind kind = Kind::Density;
  double density = 0.0;
  int count = 0;
  std::vector<Position> cells;
  friend bool operator==(const SpawnRule&, const SpawnRule&) = default;

  static SpawnRule with_density(double p) { return {Kind::Density, p, 0, {}}; }
  static SpawnRule with_count(int n) { return {Kind::Count, 0.0, n, {}}; }
  static SpawnRule at(std::vector<Position> cells) { return {Kind::Explicit, 0.0, 0, std::move(cells)}; }
};

enum class Placement { Original, RandomInRegion };

struct RespawnRule {
  enum class Kind { Never, FixedDelay, UniformDelay };
  Kind kind = Kind::Never;
  /// Delay bounds in steps, both inclusive. FixedDelay uses `min_delay` only.
  int min_delay = 1;
  int max_delay = 1;
  Placement placement = Placement::Original;
  friend bool operator==(const RespawnRule&, const RespawnRule&) = default;

  static RespawnRule never() { return {}; }
  static RespawnRule fixed(int delay, Placement where) { return {Kind::FixedDelay, delay, delay, where}; }
  static RespawnRule uniform(int lo, int hi, Placement where) { return {Kind::UniformDelay, lo, hi, where}; }
};

/// A collectible species. Walls are not species; they live in TaskConfig::walls.
struct SpeciesSpec {
  std::string name;
  Rgb color;
  /// Index into TaskConfig::biomes; empty means the whole world.
  std::optional<std::size_t> biome;
  SpawnRule spawn;
  RespawnRule respawn;
  friend bool operator==(const SpeciesSpec&, const SpeciesSpec&) = default;
};

inline constexpr int kConfigVersion = 1;
inline constexpr std::size_t kMaxSpecies = 0xFFFD;

struct TaskConfig {
  Dims world;
  bool wrap = true;
  /// Default: world center.
  std::optional<Position> agent_start;
  std::vector<Position> walls;
  std::vector<BiomeSpec> biomes;
  std::vector<SpeciesSpec> species;
  ScheduleSpec schedule;
  std::optional<CueConfig> cue;
  ObservationSpec observation;
  std::uint64_t seed = 0;
  friend bool operator==(const TaskConfig&, const TaskConfig&) = default;

  Position start() const { return agent_start.value_or(Position{world.width / 2, world.height / 2}); }

  Rect region_of(const SpeciesSpec& s) const {
    return s.biome ? biomes[*s.biome].region : Rect{0, 0, world.width, world.height};
  }

  /// Side of the observation window after clamping to full observability.
  int effective_fov() const {
    const int full = std::max(world.width, world.height) | 1;
    return std::min(observation.fov, full);
  }
};

namespace detail {

inline std::string where(const Position& p) {
  return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

inline void check_schedule(const TaskConfig& c) {
  const std::size_t n = c.species.size();
  auto expect_len = [&](std::size_t got, const char* what) {
    if (got != n) {
      throw ConfigError(std::string("schedule: ") + what + " has " + std::to_string(got) + " entries, expected " +
                        std::to_string(n) + " (one per species)");
    }
  };
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, StaticRewards>) {
          expect_len(s.rewards.size(), "rewards");
        } else if constexpr (std::is_same_v<S, DecayingRewards>) {
          expect_len(s.initial.size(), "initial");
          if (!(s.decay > 0.0 && s.decay <= 1.0)) throw ConfigError("schedule: decay must be in (0, 1]");
        } else if constexpr (std::is_same_v<S, SwitchingRewards>) {
          if (s.period < 1) throw ConfigError("schedule: switching period must be >= 1");
          if (s.phases.empty()) throw ConfigError("schedule: switching needs at least one phase");
          for (const auto& phase : s.phases) expect_len(phase.size(), "phase table");
        } else if constexpr (std::is_same_v<S, FourierRewards>) {
          expect_len(s.series.size(), "series");
          for (const auto& p : s.series) {
            if (p.a.empty() || p.a.size() != p.b.size()) {
              throw ConfigError("schedule: fourier series needs matching non-empty a and b");
            }
            if (!(p.period > 0.0)) throw ConfigError("schedule: fourier period must be positive");
            if (p.repeat < 1) throw ConfigError("schedule: fourier repeat must be >= 1");
          }
          if (s.extinction_threshold < 0) throw ConfigError("schedule: extinction_threshold must be >= 0");
          const auto& r = s.replacement;
          if (r.harmonics < 1 || r.repeat < 1 || !(r.period_min > 0.0) || r.period_max < r.period_min) {
            throw ConfigError("schedule: invalid replacement sampling ranges");
          }
        }
      },
      c.schedule);
}

}  // namespace detail

/// Throws ConfigError describing the first problem found.
inline void validate(const TaskConfig& c) {
  const Dims dims = c.world;
  if (dims.width <= 0 || dims.height <= 0) throw ConfigError("world: dimensions must be positive");
  if (dims.area() > (std::size_t{1} << 31)) throw ConfigError("world: too many cells");
  if (!c.wrap) throw ConfigError("world: only toroidal worlds are supported (wrap must be true)");

  const Position start = c.start();
  if (!dims.contains(start)) throw ConfigError("agent: start " + detail::where(start) + " is outside the world");

  std::vector<std::uint8_t> used(dims.area(), 0);  // 1 wall, 2 object
  for (const Position& w : c.walls) {
    if (!dims.contains(w)) throw ConfigError("walls: " + detail::where(w) + " is outside the world");
    auto& u = used[dims.index(w)];
    if (u) throw ConfigError("walls: duplicate wall at " + detail::where(w));
    u = 1;
  }
  if (used[dims.index(start)]) throw ConfigError("agent: start " + detail::where(start) + " is a wall");

  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < c.biomes.size(); ++i) {
    const auto& b = c.biomes[i];
    const Rect& r = b.region;
    if (!names.insert(b.name).second) throw ConfigError("biome '" + b.name + "': duplicate name");
    if (r.empty() || r.x0 < 0 || r.y0 < 0 || r.x1 > dims.width || r.y1 > dims.height) {
      throw ConfigError("biome '" + b.name + "': region is empty or outside the world");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (r.overlaps(c.biomes[j].region)) {
        throw ConfigError("biome '" + b.name + "': overlaps biome '" + c.biomes[j].name + "'");
      }
    }
  }

  if (c.species.size() > kMaxSpecies) throw ConfigError("species: too many species");
  names.clear();
  for (const auto& s : c.species) {
    const std::string tag = "species '" + s.name + "': ";
    if (!names.insert(s.name).second) throw ConfigError(tag + "duplicate name");
    if (s.biome && *s.biome >= c.biomes.size()) throw ConfigError(tag + "unknown biome");
    const Rect region = c.region_of(s);
    switch (s.spawn.kind) {
      case SpawnRule::Kind::Density:
        if (!(s.spawn.density >= 0.0 && s.spawn.density <= 1.0)) throw ConfigError(tag + "density must be in [0, 1]");
        break;
      case SpawnRule::Kind::Count:
        if (s.spawn.count < 0) throw ConfigError(tag + "count must be >= 0");
        break;
      case SpawnRule::Kind::Explicit:
        for (const Position& p : s.spawn.cells) {
          if (!region.contains(p)) throw ConfigError(tag + "cell " + detail::where(p) + " is outside its region");
          auto& u = used[dims.index(p)];
          if (u == 1) throw ConfigError(tag + "cell " + detail::where(p) + " is a wall");
          if (u == 2) throw ConfigError(tag + "duplicate object at " + detail::where(p));
          if (p == start) throw ConfigError(tag + "cell " + detail::where(p) + " is the agent start");
          u = 2;
        }
        break;
    }
    const auto& rr = s.respawn;
    if (rr.kind != RespawnRule::Kind::Never) {
      if (rr.min_delay < 1) throw ConfigError(tag + "respawn delay must be >= 1");
      if (rr.kind == RespawnRule::Kind::UniformDelay && rr.max_delay < rr.min_delay) {
        throw ConfigError(tag + "respawn delay range is inverted");
      }
    }
  }

  detail::check_schedule(c);

  if (c.cue) {
    if (c.cue->period < 1) throw ConfigError("cue: period must be >= 1");
    if (c.cue->duration < 0 || c.cue->duration > c.cue->period) {
      throw ConfigError("cue: duration must be in [0, period]");
    }
  }

  const auto& o = c.observation;
  if (o.fov <= 0) throw ConfigError("observation: fov must be positive");
  if (o.fov % 2 == 0) throw ConfigError("observation: fov must be odd");
  if (o.reward_trace && !(*o.reward_trace > 0.0 && *o.reward_trace < 1.0)) {
    throw ConfigError("observation: reward_trace decay must be in (0, 1)");
  }
  if (o.include_cue && !c.cue) throw ConfigError("observation: cue requested but no cue configured");
  if (o.mode == ObservationMode::ColorOneHot) {
    if (const auto* f = std::get_if<FourierRewards>(&c.schedule); f && f->extinction_threshold > 0) {
      throw ConfigError("observation: color one-hot cannot represent colors introduced by extinction");
    }
  }
}

}  // namespace forager
