#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <string>
#include <string_view>
#include <vector>

#include "forager/config.hpp"
#include "forager/reward.hpp"
#include "forager/rng.hpp"
#include "forager/world.hpp"

namespace forager {

// ---------------------------------------------------------------------------
// Large-scale foraging: a 1000 x 1000 torus of jelly beans and onions.

struct ExtraLargeOptions {
  Dims world{1000, 1000};
  double density = 0.1;
  double jellybean_reward = 1.0;
  double onion_reward = -1.0;
  int fov = 11;
};

inline TaskConfig build_extra_large(std::uint64_t seed = 0, const ExtraLargeOptions& o = {}) {
  TaskConfig c;
  c.world = o.world;
  const RespawnRule respawn = RespawnRule::fixed(1, Placement::RandomInRegion);
  c.species = {
      {"jellybean", {230, 25, 75}, std::nullopt, SpawnRule::with_density(o.density), respawn},
      {"onion", {145, 30, 180}, std::nullopt, SpawnRule::with_density(o.density), respawn},
  };
  c.schedule = StaticRewards{{o.jellybean_reward, o.onion_reward}};
  c.observation.fov = o.fov;
  c.observation.mode = ObservationMode::BinaryChannels;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------
// Two biomes separated by a gap: rare high-value morels on the left,
// fast-respawning oysters and deathcaps on the right.

struct MorelOptions {
  int fov = 9;
  Dims world{30, 15};
  int biome_size = 12;
  int gap = 4;
  int morel_count = 6;
  int oyster_count = 12;
  int deathcap_count = 12;
  int morel_delay = 2000;
  int oyster_delay = 20;
  int deathcap_delay = 20;
  /// Where oysters and deathcaps regrow; morels always regrow in place.
  Placement fast_placement = Placement::RandomInRegion;
  double morel_reward = 30.0;
  double oyster_reward = 1.0;
  double deathcap_reward = -1.0;
};

inline TaskConfig build_two_biome_morel(const MorelOptions& o = {}, std::uint64_t seed = 0) {
  TaskConfig c;
  c.world = o.world;
  const int y0 = (o.world.height - o.biome_size) / 2;
  // The two biomes plus the gap are centered horizontally; whatever width
  // remains forms the gap across the wrap edge.
  const int left_x0 = (o.world.width - (2 * o.biome_size + o.gap)) / 2;
  const int right_x0 = left_x0 + o.biome_size + o.gap;
  c.biomes = {
      {"morel", {left_x0, y0, left_x0 + o.biome_size, y0 + o.biome_size}},
      {"mixed", {right_x0, y0, right_x0 + o.biome_size, y0 + o.biome_size}},
  };
  c.species = {
      {"morel", {101, 67, 33}, 0, SpawnRule::with_count(o.morel_count),
       RespawnRule::fixed(o.morel_delay, Placement::Original)},
      {"oyster", {255, 105, 180}, 1, SpawnRule::with_count(o.oyster_count),
       RespawnRule::fixed(o.oyster_delay, o.fast_placement)},
      {"deathcap", {255, 215, 0}, 1, SpawnRule::with_count(o.deathcap_count),
       RespawnRule::fixed(o.deathcap_delay, o.fast_placement)},
  };
  c.schedule = StaticRewards{{o.morel_reward, o.oyster_reward, o.deathcap_reward}};
  c.observation.fov = o.fov;
  c.observation.mode = ObservationMode::BinaryChannels;
  c.seed = seed;
  return c;
}

inline TaskConfig build_two_biome_morel(int fov, std::uint64_t seed = 0) {
  MorelOptions o;
  o.fov = fov;
  return build_two_biome_morel(o, seed);
}

// ---------------------------------------------------------------------------
// Two stacked biomes with purple and yellow mushrooms whose rewards follow a
// hidden two-phase schedule.

struct SwitchOptions {
  std::int64_t period = 50'000;
  int per_color_count = 8;
  int respawn_delay = 10;
  std::optional<double> reward_trace;
};

inline constexpr Rgb kPurple{128, 0, 128};
inline constexpr Rgb kYellow{255, 215, 0};

inline TaskConfig build_two_biome_switch(const SwitchOptions& o = {}, std::uint64_t seed = 0) {
  TaskConfig c;
  c.world = {20, 32};
  c.biomes = {
      {"top", {2, 2, 18, 14}},
      {"bottom", {2, 18, 18, 30}},
  };
  auto segment = [&](int x0, int y0, int x1, int y1) {
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) c.walls.push_back({x, y});
    }
  };
  // Barriers between the biomes with one opening each, plus interior segments.
  segment(0, 16, 7, 16);
  segment(12, 16, 19, 16);
  segment(0, 0, 5, 0);
  segment(14, 0, 19, 0);
  segment(6, 5, 6, 8);
  segment(13, 8, 13, 11);
  segment(6, 21, 6, 24);
  segment(13, 24, 13, 27);
  c.agent_start = Position{10, 16};
  const RespawnRule respawn = RespawnRule::fixed(o.respawn_delay, Placement::RandomInRegion);
  c.species = {
      {"purple-top", kPurple, 0, SpawnRule::with_count(o.per_color_count), respawn},
      {"yellow-top", kYellow, 0, SpawnRule::with_count(o.per_color_count), respawn},
      {"purple-bottom", kPurple, 1, SpawnRule::with_count(o.per_color_count), respawn},
      {"yellow-bottom", kYellow, 1, SpawnRule::with_count(o.per_color_count), respawn},
  };
  SwitchingRewards s;
  s.period = o.period;
  s.phases = {
      {4.0, -2.0, -8.0, -14.0},
      {-14.0, -8.0, -2.0, 4.0},
  };
  c.schedule = s;
  c.observation.fov = 9;
  c.observation.mode = ObservationMode::ColorOneHot;
  c.observation.include_last_action = true;
  c.observation.include_last_reward = true;
  c.observation.reward_trace = o.reward_trace;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------
// Four quadrant biomes, one species each, rewards driven by sampled Fourier
// series, species extinction and a periodic cue.

struct UnendingOptions {
  int quadrant = 30;
  int fov = 9;
  double density = 0.1;
  int wall_segments = 48;
  FourierSampling sampling{};
  std::int64_t extinction_threshold = 10'000;
  int respawn_min = 9;
  int respawn_max = 11;
  CueConfig cue{100, 10, CueMode::Windowed};
};

namespace detail {

// Every open cell reachable from every other on the torus.
inline bool open_cells_connected(Dims dims, const std::vector<std::uint8_t>& wall) {
  const std::size_t n = dims.area();
  std::size_t open = 0;
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!wall[i]) {
      ++open;
      if (first == n) first = i;
    }
  }
  if (open == 0) return true;
  std::vector<std::uint8_t> seen(n, 0);
  std::deque<std::size_t> queue{first};
  seen[first] = 1;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const Position p = dims.position(queue.front());
    queue.pop_front();
    for (Action a : kAllActions) {
      const std::size_t q = dims.index(wrap(p, offset_of(a), dims));
      if (wall[q] || seen[q]) continue;
      seen[q] = 1;
      ++reached;
      queue.push_back(q);
    }
  }
  return reached == open;
}

}  // namespace detail

inline TaskConfig build_unending_four(std::uint64_t seed, CueMode cue_mode = CueMode::Windowed,
                                      const UnendingOptions& o = {}) {
  TaskConfig c;
  const int q = o.quadrant;
  c.world = {2 * q, 2 * q};
  c.biomes = {
      {"north-west", {0, 0, q, q}},
      {"north-east", {q, 0, 2 * q, q}},
      {"south-west", {0, q, q, 2 * q}},
      {"south-east", {q, q, 2 * q, 2 * q}},
  };
  Rng layout = make_stream(seed, Stream::Layout);

  std::vector<Rgb> palette(colors::kSpeciesPalette.begin(), colors::kSpeciesPalette.end());
  FourierRewards rewards;
  rewards.center = true;
  rewards.extinction_threshold = o.extinction_threshold;
  rewards.replacement = o.sampling;
  const RespawnRule respawn = RespawnRule::uniform(o.respawn_min, o.respawn_max, Placement::RandomInRegion);
  for (std::size_t b = 0; b < c.biomes.size(); ++b) {
    const std::size_t pick = layout.below(palette.size());
    const Rgb color = palette[pick];
    palette.erase(palette.begin() + static_cast<std::ptrdiff_t>(pick));
    c.species.push_back({"species-" + c.biomes[b].name, color, b, SpawnRule::with_density(o.density), respawn});
    rewards.series.push_back(sample_fourier(layout, o.sampling));
  }
  c.schedule = std::move(rewards);

  // Scattered straight wall segments, each kept only if the open cells stay
  // connected.
  const Dims dims = c.world;
  const Position start = c.start();
  std::vector<std::uint8_t> wall(dims.area(), 0);
  for (int i = 0; i < o.wall_segments; ++i) {
    const Position origin{static_cast<int>(layout.below(static_cast<std::uint64_t>(dims.width))),
                          static_cast<int>(layout.below(static_cast<std::uint64_t>(dims.height)))};
    const int length = static_cast<int>(layout.uniform_int(3, 6));
    const Offset dir = layout.bernoulli(0.5) ? Offset{1, 0} : Offset{0, 1};
    std::vector<std::size_t> added;
    Position p = origin;
    for (int k = 0; k < length; ++k) {
      const std::size_t idx = dims.index(p);
      if (p != start && !wall[idx]) {
        wall[idx] = 1;
        added.push_back(idx);
      }
      p = wrap(p, dir, dims);
    }
    if (!detail::open_cells_connected(dims, wall)) {
      for (std::size_t idx : added) wall[idx] = 0;
    }
  }
  for (std::size_t i = 0; i < wall.size(); ++i) {
    if (wall[i]) c.walls.push_back(dims.position(i));
  }

  c.cue = o.cue;
  c.cue->mode = cue_mode;
  c.observation.fov = o.fov;
  c.observation.mode = ObservationMode::Rgb;
  c.observation.include_last_action = true;
  c.observation.include_last_reward = true;
  c.observation.include_cue = true;
  c.seed = seed;
  return c;
}

// ---------------------------------------------------------------------------
// Name registry shared by the CLI and the bindings.

inline std::vector<std::string> preset_names() {
  return {"forager-extra-large", "forager-two-biome-morel", "forager-two-biome-switch", "forager-unending",
          "forager-unending-cue-always"};
}

/// Also accepts "forager-two-biome-morel-fov<N>" for the field-of-view sweep.
inline TaskConfig make_preset(std::string_view name, std::uint64_t seed) {
  if (name == "forager-extra-large") return build_extra_large(seed);
  if (name == "forager-two-biome-morel") return build_two_biome_morel(MorelOptions{}, seed);
  if (name == "forager-two-biome-switch") return build_two_biome_switch(SwitchOptions{}, seed);
  if (name == "forager-unending") return build_unending_four(seed, CueMode::Windowed);
  if (name == "forager-unending-cue-always") return build_unending_four(seed, CueMode::Always);
  constexpr std::string_view morel_fov = "forager-two-biome-morel-fov";
  if (name.starts_with(morel_fov)) {
    const std::string_view digits = name.substr(morel_fov.size());
    int fov = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), fov);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
      return build_two_biome_morel(MorelOptions{.fov = fov}, seed);
    }
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

}  // namespace forager
