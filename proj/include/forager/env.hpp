#pragma once

#include <optional>
#include <span>
#include <vector>

#include "forager/config.hpp"
#include "forager/observation.hpp"
#include "forager/world.hpp"

namespace forager {

/// A World plus everything needed to emit observations: the encoding
/// table, last action/reward, the reward trace and the cue.
class Environment {
 public:
  Environment(const TaskConfig& config, std::uint64_t seed) : world_(config, seed) { init(); }
  explicit Environment(const TaskConfig& config) : Environment(config, config.seed) {}

  const Observation& reset(std::uint64_t seed) {
    World fresh(world_.config(), seed);
    world_ = std::move(fresh);
    init();
    return obs_;
  }

  StepOutcome step(Action a) {
    StepOutcome out = world_.step(a);
    if (out.replacement) table_ = make_encoding(world_, spec_.mode);
    last_action_ = a;
    last_reward_ = out.reward;
    if (trace_) *trace_ = update_trace(*trace_, out.reward);
    observe();
    return out;
  }

  const World& world() const { return world_; }
  const TaskConfig& config() const { return world_.config(); }
  const Observation& observation() const { return obs_; }
  const EncodingTable& encoding() const { return table_; }
  int fov() const { return fov_; }
  std::span<const Cell> window() const { return window_; }
  /// Cue vector at the current tick (empty when the task has no cue).
  std::span<const float> cue() const { return cue_; }
  std::optional<Action> last_action() const { return last_action_; }
  double last_reward() const { return last_reward_; }
  const std::optional<RewardTrace>& trace() const { return trace_; }

 private:
  void init() {
    spec_ = world_.config().observation;
    fov_ = world_.config().effective_fov();
    table_ = make_encoding(world_, spec_.mode);
    window_.assign(static_cast<std::size_t>(fov_) * static_cast<std::size_t>(fov_), Cell::empty());
    last_action_.reset();
    last_reward_ = 0.0;
    trace_.reset();
    if (spec_.reward_trace) trace_ = RewardTrace{*spec_.reward_trace, 0.0};
    cue_.assign(world_.config().cue ? world_.config().biomes.size() : 0, 0.0f);
    obs_.fov = fov_;
    obs_.channels = table_.channels;
    obs_.grid.assign(window_.size() * static_cast<std::size_t>(table_.channels), 0);
    observe();
  }

  void observe() {
    extract_fov(world_, fov_, window_);
    encode(window_, fov_, table_, obs_.grid);
    if (const auto& cue = world_.config().cue) cue_vector(*cue, world_.tick(), world_.biome_rewards(), cue_);
    assemble_aux(spec_, last_action_, last_reward_, trace_, cue_, obs_.aux);
  }

  World world_;
  ObservationSpec spec_;
  int fov_ = 0;
  EncodingTable table_;
  std::vector<Cell> window_;
  std::optional<Action> last_action_;
  double last_reward_ = 0.0;
  std::optional<RewardTrace> trace_;
  std::vector<float> cue_;
  Observation obs_;
};

}  // namespace forager
