#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "forager/rng.hpp"

namespace forager {

/// One sampled harmonic series
///   r(t) = sum_{n=1..N} a_n cos(2 pi n k / T) + b_n sin(2 pi n k / T),  k = floor(t / repeat).
/// `a` and `b` hold the coefficients for n = 1..N in order.
struct FourierParams {
  std::vector<double> a;
  std::vector<double> b;
  double period = 1.0;
  std::int64_t repeat = 1;
  friend bool operator==(const FourierParams&, const FourierParams&) = default;

  std::size_t harmonics() const { return a.size(); }
};

inline double fourier_value(const FourierParams& params, std::uint64_t tick) {
  const auto k = static_cast<double>(tick / static_cast<std::uint64_t>(params.repeat));
  double sum = 0.0;
  for (std::size_t i = 0; i < params.a.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double angle = 2.0 * std::numbers::pi * n * k / params.period;
    sum += params.a[i] * std::cos(angle) + params.b[i] * std::sin(angle);
  }
  return sum;
}

/// Sampling ranges for fresh series (initial draws and extinction replacements).
struct FourierSampling {
  int harmonics = 10;
  std::int64_t repeat = 1000;
  double period_min = 1.0;
  double period_max = 1000.0;
  friend bool operator==(const FourierSampling&, const FourierSampling&) = default;
};

// a_n and b_n have standard deviation 1/n; T is continuous uniform.
inline FourierParams sample_fourier(Rng& rng, const FourierSampling& s) {
  FourierParams p;
  p.a.reserve(static_cast<std::size_t>(s.harmonics));
  p.b.reserve(static_cast<std::size_t>(s.harmonics));
  for (int n = 1; n <= s.harmonics; ++n) {
    p.a.push_back(rng.normal(0.0, 1.0 / n));
    p.b.push_back(rng.normal(0.0, 1.0 / n));
  }
  p.period = rng.uniform(s.period_min, s.period_max);
  p.repeat = s.repeat;
  return p;
}

/// Subtracts the mean so the outputs sum to zero; the largest output is then
/// never negative.
inline void center_rewards_in_place(std::span<double> values) {
  if (values.empty()) return;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  for (double& v : values) v -= mean;
}

inline std::vector<double> center_rewards(std::span<const double> raw) {
  std::vector<double> out(raw.begin(), raw.end());
  center_rewards_in_place(out);
  return out;
}

// ---------------------------------------------------------------------------
// Schedule descriptions. Every per-species vector is indexed by species slot
// (declaration order in the task config).

struct StaticRewards {
  std::vector<double> rewards;
  friend bool operator==(const StaticRewards&, const StaticRewards&) = default;
};

/// value <- floor + (value - floor) * decay, once per step.
struct DecayingRewards {
  std::vector<double> initial;
  double decay = 1.0;
  double floor = 0.0;
  friend bool operator==(const DecayingRewards&, const DecayingRewards&) = default;
};

/// Hidden periodic switch: phase = floor(tick / period) mod phases.size().
struct SwitchingRewards {
  std::int64_t period = 1;
  std::vector<std::vector<double>> phases;
  friend bool operator==(const SwitchingRewards&, const SwitchingRewards&) = default;
};

struct FourierRewards {
  std::vector<FourierParams> series;
  bool center = true;
  /// Collections of one species lineage before it goes extinct; 0 disables.
  std::int64_t extinction_threshold = 0;
  FourierSampling replacement;
  friend bool operator==(const FourierRewards&, const FourierRewards&) = default;
};

using ScheduleSpec = std::variant<StaticRewards, DecayingRewards, SwitchingRewards, FourierRewards>;

struct SwitchNotification {
  std::uint64_t tick = 0;
  std::size_t from_phase = 0;
  std::size_t to_phase = 0;
};

/// Holds the current reward value of every species slot and evolves it
/// one step at a time.
class RewardEngine {
 public:
  RewardEngine() = default;

  RewardEngine(ScheduleSpec spec, std::size_t species_count) : spec_(std::move(spec)), values_(species_count, 0.0) {
    if (std::holds_alternative<FourierRewards>(spec_)) raw_.assign(species_count, 0.0);
    if (auto* d = std::get_if<DecayingRewards>(&spec_)) values_ = d->initial;
    recompute(0, true);
  }

  std::size_t species_count() const { return values_.size(); }

  // Current value for a slot; this is what a collection at the current tick pays.
  double value(std::size_t slot) const {
    if (slot >= values_.size()) throw std::out_of_range("unknown species slot");
    return values_[slot];
  }
  std::span<const double> values() const { return values_; }

  // Uncentered series values (Fourier schedules only; empty otherwise).
  std::span<const double> raw_values() const { return raw_; }

  std::size_t phase() const { return phase_; }

  const ScheduleSpec& spec() const { return spec_; }

  /// Brings the values up to date for `tick`. Call once per step after the
  /// tick counter advanced.
  std::optional<SwitchNotification> advance(std::uint64_t tick) {
    if (auto* d = std::get_if<DecayingRewards>(&spec_)) {
      for (double& v : values_) v = d->floor + (v - d->floor) * d->decay;
      return std::nullopt;
    }
    const std::size_t before = phase_;
    recompute(tick, false);
    if (std::holds_alternative<SwitchingRewards>(spec_) && phase_ != before) {
      return SwitchNotification{tick, before, phase_};
    }
    return std::nullopt;
  }

  /// Swaps in a new series for a slot (extinction replacement). Values are
  /// refreshed on the next advance().
  void replace_series(std::size_t slot, FourierParams params) {
    auto& f = std::get<FourierRewards>(spec_);
    f.series.at(slot) = std::move(params);
    dirty_ = true;
  }

  const FourierParams* series(std::size_t slot) const {
    if (auto* f = std::get_if<FourierRewards>(&spec_)) return &f->series.at(slot);
    return nullptr;
  }

  /// Number of scalars of mutable schedule state.
  std::size_t state_size() const { return values_.size() + raw_.size() + 1; }

 private:
  void recompute(std::uint64_t tick, bool force) {
    std::visit(
        [&](auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, StaticRewards>) {
            if (force) values_ = s.rewards;
          } else if constexpr (std::is_same_v<S, SwitchingRewards>) {
            phase_ = static_cast<std::size_t>((tick / static_cast<std::uint64_t>(s.period)) % s.phases.size());
            const auto& table = s.phases[phase_];
            std::copy(table.begin(), table.end(), values_.begin());
          } else if constexpr (std::is_same_v<S, FourierRewards>) {
            // Values only move when a plateau boundary is crossed.
            const std::uint64_t plateau = s.series.empty() ? 0 : tick / static_cast<std::uint64_t>(s.series.front().repeat);
            if (!force && !dirty_ && plateau == plateau_ && uniform_repeat(s)) return;
            plateau_ = plateau;
            dirty_ = false;
            for (std::size_t i = 0; i < s.series.size(); ++i) raw_[i] = fourier_value(s.series[i], tick);
            std::copy(raw_.begin(), raw_.end(), values_.begin());
            if (s.center) center_rewards_in_place(values_);
          }
        },
        spec_);
  }

  static bool uniform_repeat(const FourierRewards& s) {
    return std::all_of(s.series.begin(), s.series.end(),
                       [&](const FourierParams& p) { return p.repeat == s.series.front().repeat; });
  }

  ScheduleSpec spec_;
  std::vector<double> values_;
  std::vector<double> raw_;
  std::size_t phase_ = 0;
  std::uint64_t plateau_ = 0;
  bool dirty_ = false;
};

// ---------------------------------------------------------------------------
// Extinction bookkeeping.

using SpeciesId = std::uint32_t;

struct Replacement {
  std::size_t slot = 0;
  SpeciesId old_species = 0;
  SpeciesId new_species = 0;
};

class SpeciesLifecycle {
 public:
  SpeciesLifecycle() = default;
  SpeciesLifecycle(std::size_t slots, std::int64_t threshold) : threshold_(threshold), counts_(slots, 0), ids_(slots) {
    std::iota(ids_.begin(), ids_.end(), SpeciesId{0});
    next_id_ = static_cast<SpeciesId>(slots);
  }

  /// Counts one collection. On reaching the threshold the lineage in `slot`
  /// ends: a fresh id takes the slot and its counter restarts at zero.
  std::optional<Replacement> record(std::size_t slot) {
    ++counts_.at(slot);
    if (threshold_ <= 0 || counts_[slot] < threshold_) return std::nullopt;
    Replacement r{slot, ids_[slot], next_id_++};
    ids_[slot] = r.new_species;
    counts_[slot] = 0;
    return r;
  }

  std::int64_t count(std::size_t slot) const { return counts_.at(slot); }
  SpeciesId id(std::size_t slot) const { return ids_.at(slot); }
  std::int64_t threshold() const { return threshold_; }
  std::size_t slots() const { return counts_.size(); }

 private:
  std::int64_t threshold_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<SpeciesId> ids_;
  SpeciesId next_id_ = 0;
};

// ---------------------------------------------------------------------------
// Global cue.

enum class CueMode { Windowed, Always };

struct CueConfig {
  std::int64_t period = 100;
  std::int64_t duration = 10;
  CueMode mode = CueMode::Windowed;
  friend bool operator==(const CueConfig&, const CueConfig&) = default;
};

inline bool cue_active(const CueConfig& cue, std::uint64_t tick) {
  if (cue.mode == CueMode::Always) return true;
  return static_cast<std::int64_t>(tick % static_cast<std::uint64_t>(cue.period)) < cue.duration;
}

/// One-hot over biomes at the best current reward (lowest index on ties),
/// or all zeros outside the cue window.
inline void cue_vector(const CueConfig& cue, std::uint64_t tick, std::span<const double> biome_rewards,
                       std::span<float> out) {
  std::fill(out.begin(), out.end(), 0.0f);
  if (biome_rewards.empty() || !cue_active(cue, tick)) return;
  std::size_t best = 0;
  for (std::size_t i = 1; i < biome_rewards.size(); ++i) {
    if (biome_rewards[i] > biome_rewards[best]) best = i;
  }
  out[best] = 1.0f;
}

inline std::vector<float> cue_vector(const CueConfig& cue, std::uint64_t tick, std::span<const double> biome_rewards) {
  std::vector<float> out(biome_rewards.size(), 0.0f);
  cue_vector(cue, tick, biome_rewards, out);
  return out;
}

}  // namespace forager
