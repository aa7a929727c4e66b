#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "forager/config.hpp"
#include "forager/geometry.hpp"
#include "forager/reward.hpp"
#include "forager/rng.hpp"

namespace forager {

namespace colors {
// Candidate species colors. Replacement species draw from the entries not
// currently in use.
inline constexpr std::array<Rgb, 16> kSpeciesPalette{{
    {230, 25, 75},   {60, 180, 75},   {255, 225, 25}, {245, 130, 48}, {145, 30, 180}, {70, 240, 240},
    {240, 50, 230},  {210, 245, 60},  {250, 190, 212}, {0, 128, 128}, {220, 190, 255}, {170, 110, 40},
    {128, 0, 0},     {170, 255, 195}, {128, 128, 0},  {255, 215, 180},
}};
}  // namespace colors

/// Cell content packed in 16 bits: 0 empty, 1 wall, slot + 2 for an object.
class Cell {
 public:
  constexpr Cell() = default;
  static constexpr Cell empty() { return Cell(0); }
  static constexpr Cell wall() { return Cell(1); }
  static constexpr Cell object(std::size_t slot) { return Cell(static_cast<std::uint16_t>(slot + 2)); }

  constexpr bool is_empty() const { return code_ == 0; }
  constexpr bool is_wall() const { return code_ == 1; }
  constexpr bool is_object() const { return code_ >= 2; }
  constexpr std::size_t slot() const { return static_cast<std::size_t>(code_ - 2); }
  constexpr std::uint16_t code() const { return code_; }

  friend constexpr bool operator==(Cell, Cell) = default;

 private:
  constexpr explicit Cell(std::uint16_t code) : code_(code) {}
  std::uint16_t code_ = 0;
};

struct RespawnEvent {
  std::uint64_t due_tick = 0;
  std::uint64_t sequence = 0;
  std::uint32_t slot = 0;
  Placement placement = Placement::Original;
  /// Cell index for Original placement.
  std::uint32_t cell = 0;
};

struct MoveOutcome {
  Position new_pos;
  std::optional<std::size_t> collected_slot;
  std::optional<SpeciesId> collected;
  std::optional<Replacement> replacement;
};

struct StepOutcome {
  double reward = 0.0;
  Position position;
  std::optional<std::size_t> collected_slot;
  std::optional<SpeciesId> collected;
  std::optional<Replacement> replacement;
  std::optional<SwitchNotification> switched;
};

struct Respawned {
  SpeciesId species = 0;
  Position position;
  friend bool operator==(const Respawned&, const Respawned&) = default;
};

/// Deterministic internal-structure sizes, in elements.
struct StateSize {
  std::size_t cells = 0;
  std::size_t respawn_queue = 0;
  std::size_t schedule = 0;
  std::size_t total() const { return cells + respawn_queue + schedule; }
};

/// The simulation state of one continuing Forager task. Single-threaded;
/// independent instances may live on different threads.
class World {
 public:
  World(const TaskConfig& config, std::uint64_t seed)
      : config_(validated(config)),
        dims_(config_.world),
        grid_(config_.world.area(), Cell::empty()),
        spawn_rng_(make_stream(seed, Stream::Spawn)),
        respawn_rng_(make_stream(seed, Stream::Respawn)),
        schedule_rng_(make_stream(seed, Stream::Schedule)) {
    agent_ = config_.start();
    const std::size_t n = config_.species.size();
    rewards_ = RewardEngine(config_.schedule, n);
    std::int64_t threshold = 0;
    if (const auto* f = std::get_if<FourierRewards>(&config_.schedule)) threshold = f->extinction_threshold;
    lifecycle_ = SpeciesLifecycle(n, threshold);
    for (const auto& s : config_.species) {
      colors_.push_back(s.color);
      regions_.push_back(config_.region_of(s));
    }
    biome_rewards_.assign(config_.biomes.size(), 0.0);
    spawn_initial();
    initial_objects_ = static_cast<std::size_t>(
        std::count_if(grid_.begin(), grid_.end(), [](Cell c) { return c.is_object(); }));
    heap_.reserve(initial_objects_);
  }

  World(const TaskConfig& config) : World(config, config.seed) {}

  const TaskConfig& config() const { return config_; }
  Dims dims() const { return dims_; }
  int width() const { return dims_.width; }
  int height() const { return dims_.height; }
  Position agent() const { return agent_; }
  std::uint64_t tick() const { return tick_; }

  Cell at(Position p) const { return grid_[dims_.index(p)]; }
  std::span<const Cell> cells() const { return grid_; }

  std::size_t species_count() const { return colors_.size(); }
  SpeciesId species_id(std::size_t slot) const { return lifecycle_.id(slot); }
  Rgb species_color(std::size_t slot) const { return colors_.at(slot); }
  const Rect& species_region(std::size_t slot) const { return regions_.at(slot); }
  std::int64_t consumption_count(std::size_t slot) const { return lifecycle_.count(slot); }

  const RewardEngine& rewards() const { return rewards_; }
  const SpeciesLifecycle& lifecycle() const { return lifecycle_; }

  std::size_t initial_object_count() const { return initial_objects_; }
  std::size_t respawn_queue_size() const { return heap_.size(); }
  std::span<const RespawnEvent> pending_respawns() const { return heap_; }

  StateSize state_size() const { return {grid_.size(), heap_.size(), rewards_.state_size()}; }

  /// Moves the agent, collecting whatever occupies the target cell. Walls
  /// block the move.
  MoveOutcome apply_action(Action a) {
    const Position target = wrap(agent_, offset_of(a), dims_);
    const std::size_t idx = dims_.index(target);
    const Cell c = grid_[idx];
    MoveOutcome out;
    if (c.is_wall()) {
      out.new_pos = agent_;
      return out;
    }
    agent_ = target;
    out.new_pos = target;
    if (c.is_object()) {
      const std::size_t slot = c.slot();
      grid_[idx] = Cell::empty();
      out.collected_slot = slot;
      out.collected = lifecycle_.id(slot);
      schedule_respawn(slot, idx);
      out.replacement = lifecycle_.record(slot);
      if (out.replacement) replace_species(slot);
    }
    return out;
  }

  /// Places every due respawn. Call after the tick counter advanced.
  std::span<const Respawned> process_respawns() {
    respawned_.clear();
    deferred_.clear();
    while (!heap_.empty() && heap_.front().due_tick <= tick_) {
      std::pop_heap(heap_.begin(), heap_.end(), later);
      RespawnEvent ev = heap_.back();
      heap_.pop_back();
      std::optional<std::size_t> cell;
      if (ev.placement == Placement::Original) {
        if (vacant(ev.cell)) cell = ev.cell;
      } else {
        cell = random_free_cell(regions_[ev.slot]);
      }
      if (!cell) {
        ev.due_tick = tick_ + 1;
        deferred_.push_back(ev);
        continue;
      }
      grid_[*cell] = Cell::object(ev.slot);
      respawned_.push_back({lifecycle_.id(ev.slot), dims_.position(*cell)});
    }
    for (const auto& ev : deferred_) {
      heap_.push_back(ev);
      std::push_heap(heap_.begin(), heap_.end(), later);
    }
    return respawned_;
  }

  /// One full transition: move and collect, pay the reward, advance the
  /// clock, place due respawns, then evolve the reward schedule.
  StepOutcome step(Action a) {
    MoveOutcome move = apply_action(a);
    StepOutcome out;
    out.position = move.new_pos;
    out.collected_slot = move.collected_slot;
    out.collected = move.collected;
    out.replacement = move.replacement;
    if (move.collected_slot) out.reward = rewards_.value(*move.collected_slot);
    ++tick_;
    process_respawns();
    out.switched = rewards_.advance(tick_);
    return out;
  }

  /// Best current reward among each biome's species (-inf for a biome
  /// without species).
  std::span<const double> biome_rewards() {
    std::fill(biome_rewards_.begin(), biome_rewards_.end(), -std::numeric_limits<double>::infinity());
    for (std::size_t s = 0; s < config_.species.size(); ++s) {
      if (const auto& b = config_.species[s].biome) {
        biome_rewards_[*b] = std::max(biome_rewards_[*b], rewards_.value(s));
      }
    }
    return biome_rewards_;
  }

  /// Per-slot number of objects currently on the grid.
  std::vector<std::size_t> objects_on_grid() const {
    std::vector<std::size_t> counts(species_count(), 0);
    for (Cell c : grid_) {
      if (c.is_object()) ++counts[c.slot()];
    }
    return counts;
  }

  std::vector<std::size_t> pending_by_species() const {
    std::vector<std::size_t> counts(species_count(), 0);
    for (const auto& ev : heap_) ++counts[ev.slot];
    return counts;
  }

 private:
  static const TaskConfig& validated(const TaskConfig& c) {
    validate(c);
    return c;
  }

  // Min-heap order on (due_tick, sequence).
  static bool later(const RespawnEvent& a, const RespawnEvent& b) {
    return a.due_tick != b.due_tick ? a.due_tick > b.due_tick : a.sequence > b.sequence;
  }

  bool vacant(std::size_t idx) const { return grid_[idx].is_empty() && idx != dims_.index(agent_); }

  void spawn_initial() {
    for (const Position& w : config_.walls) grid_[dims_.index(w)] = Cell::wall();
    const std::size_t start = dims_.index(agent_);
    for (std::size_t slot = 0; slot < config_.species.size(); ++slot) {
      const auto& s = config_.species[slot];
      const Rect region = regions_[slot];
      switch (s.spawn.kind) {
        case SpawnRule::Kind::Density:
          for (std::size_t i = 0; i < region.area(); ++i) {
            const std::size_t idx = dims_.index(region.at(i));
            // Draw for every cell so later cells do not depend on occupancy.
            if (spawn_rng_.bernoulli(s.spawn.density) && grid_[idx].is_empty() && idx != start) {
              grid_[idx] = Cell::object(slot);
            }
          }
          break;
        case SpawnRule::Kind::Count: {
          std::vector<std::size_t> candidates;
          for (std::size_t i = 0; i < region.area(); ++i) {
            const std::size_t idx = dims_.index(region.at(i));
            if (grid_[idx].is_empty() && idx != start) candidates.push_back(idx);
          }
          const auto want = static_cast<std::size_t>(s.spawn.count);
          if (candidates.size() < want) {
            throw ConfigError("species '" + s.name + "': region has room for " + std::to_string(candidates.size()) +
                              " objects, " + std::to_string(want) + " requested");
          }
          for (std::size_t i = 0; i < want; ++i) {
            const std::size_t j = i + spawn_rng_.below(candidates.size() - i);
            std::swap(candidates[i], candidates[j]);
            grid_[candidates[i]] = Cell::object(slot);
          }
          break;
        }
        case SpawnRule::Kind::Explicit:
          for (const Position& p : s.spawn.cells) grid_[dims_.index(p)] = Cell::object(slot);
          break;
      }
    }
  }

  void schedule_respawn(std::size_t slot, std::size_t idx) {
    const RespawnRule& rule = config_.species[slot].respawn;
    std::int64_t delay = 0;
    switch (rule.kind) {
      case RespawnRule::Kind::Never: return;
      case RespawnRule::Kind::FixedDelay: delay = rule.min_delay; break;
      case RespawnRule::Kind::UniformDelay: delay = respawn_rng_.uniform_int(rule.min_delay, rule.max_delay); break;
    }
    heap_.push_back({tick_ + static_cast<std::uint64_t>(delay), next_sequence_++, static_cast<std::uint32_t>(slot),
                     rule.placement, static_cast<std::uint32_t>(idx)});
    std::push_heap(heap_.begin(), heap_.end(), later);
  }

  // Uniform over empty cells of the region other than the agent's cell.
  std::optional<std::size_t> random_free_cell(const Rect& region) {
    const std::size_t area = region.area();
    for (int attempt = 0; attempt < 32; ++attempt) {
      const std::size_t idx = dims_.index(region.at(respawn_rng_.below(area)));
      if (vacant(idx)) return idx;
    }
    std::size_t available = 0;
    for (std::size_t i = 0; i < area; ++i) available += vacant(dims_.index(region.at(i))) ? 1 : 0;
    if (available == 0) return std::nullopt;
    std::size_t pick = respawn_rng_.below(available);
    for (std::size_t i = 0; i < area; ++i) {
      const std::size_t idx = dims_.index(region.at(i));
      if (vacant(idx) && pick-- == 0) return idx;
    }
    return std::nullopt;
  }

  // The slot keeps its grid objects and pending events; only identity,
  // color and reward series change.
  void replace_species(std::size_t slot) {
    std::vector<Rgb> choices;
    for (const Rgb& c : colors::kSpeciesPalette) {
      if (std::find(colors_.begin(), colors_.end(), c) == colors_.end()) choices.push_back(c);
    }
    if (!choices.empty()) colors_[slot] = choices[schedule_rng_.below(choices.size())];
    if (const auto* f = std::get_if<FourierRewards>(&rewards_.spec())) {
      rewards_.replace_series(slot, sample_fourier(schedule_rng_, f->replacement));
    }
  }

  TaskConfig config_;
  Dims dims_;
  std::vector<Cell> grid_;
  Position agent_;
  std::uint64_t tick_ = 0;
  std::vector<RespawnEvent> heap_;
  std::vector<RespawnEvent> deferred_;
  std::vector<Respawned> respawned_;
  std::uint64_t next_sequence_ = 0;
  Rng spawn_rng_;
  Rng respawn_rng_;
  Rng schedule_rng_;
  RewardEngine rewards_;
  SpeciesLifecycle lifecycle_;
  std::vector<Rgb> colors_;
  std::vector<Rect> regions_;
  std::vector<double> biome_rewards_;
  std::size_t initial_objects_ = 0;
};

}  // namespace forager
