#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "forager/config.hpp"
#include "forager/world.hpp"

namespace forager {

// Grid tensors are row-major (row, col, channel); row 0 is the top of the
// window and the agent sits at (fov / 2, fov / 2).
struct Observation {
  int fov = 0;
  int channels = 0;
  std::vector<std::uint8_t> grid;
  /// Layout: last action one-hot (4), last reward (1), reward trace (1),
  /// cue (one per biome); disabled parts take no space.
  std::vector<float> aux;

  std::array<int, 3> shape() const { return {fov, fov, channels}; }
  std::uint8_t at(int row, int col, int channel) const {
    return grid[(static_cast<std::size_t>(row) * fov + col) * channels + channel];
  }
  friend bool operator==(const Observation&, const Observation&) = default;
};

/// window[row * fov + col] = grid[wrap(agent + (col - fov/2, row - fov/2))].
inline void extract_fov(const World& world, int fov, std::span<Cell> out) {
  if (fov <= 0 || fov % 2 == 0) throw std::invalid_argument("fov must be odd");
  const Dims dims = world.dims();
  const Position agent = world.agent();
  const int half = fov / 2;
  const auto cells = world.cells();
  for (int row = 0; row < fov; ++row) {
    const int y = wrap_coord(agent.y + row - half, dims.height);
    const std::size_t base = static_cast<std::size_t>(y) * static_cast<std::size_t>(dims.width);
    int x = wrap_coord(agent.x - half, dims.width);
    Cell* dst = out.data() + static_cast<std::size_t>(row) * fov;
    for (int col = 0; col < fov; ++col) {
      dst[col] = cells[base + static_cast<std::size_t>(x)];
      if (++x == dims.width) x = 0;
    }
  }
}

inline std::vector<Cell> extract_fov(const World& world, int fov) {
  std::vector<Cell> out(static_cast<std::size_t>(fov) * static_cast<std::size_t>(fov));
  extract_fov(world, fov, out);
  return out;
}

/// How cell contents map onto tensor channels for one world.
struct EncodingTable {
  ObservationMode mode = ObservationMode::BinaryChannels;
  int channels = 0;
  /// Channel per species slot; -1 when the slot's color has no plane.
  std::vector<int> slot_channel;
  int wall_channel = -1;
  std::vector<Rgb> slot_color;
  /// ColorOneHot planes, in order of first appearance among the configured species.
  std::vector<Rgb> palette;
};

/// Binary mode: one plane per species then a wall plane when the task has
/// walls. Color mode: one plane per distinct configured color then the wall
/// plane. RGB: three planes.
inline EncodingTable make_encoding(const World& world, ObservationMode mode) {
  EncodingTable t;
  t.mode = mode;
  const auto& cfg = world.config();
  const bool has_walls = !cfg.walls.empty();
  const std::size_t n = world.species_count();
  for (std::size_t s = 0; s < n; ++s) t.slot_color.push_back(world.species_color(s));
  switch (mode) {
    case ObservationMode::BinaryChannels:
      for (std::size_t s = 0; s < n; ++s) t.slot_channel.push_back(static_cast<int>(s));
      t.channels = static_cast<int>(n);
      break;
    case ObservationMode::ColorOneHot:
      for (const auto& s : cfg.species) {
        if (std::find(t.palette.begin(), t.palette.end(), s.color) == t.palette.end()) t.palette.push_back(s.color);
      }
      for (std::size_t s = 0; s < n; ++s) {
        auto it = std::find(t.palette.begin(), t.palette.end(), t.slot_color[s]);
        t.slot_channel.push_back(it == t.palette.end() ? -1 : static_cast<int>(it - t.palette.begin()));
      }
      t.channels = static_cast<int>(t.palette.size());
      break;
    case ObservationMode::Rgb:
      t.channels = 3;
      return t;
  }
  if (has_walls) t.wall_channel = t.channels++;
  return t;
}

/// Writes fov * fov * channels bytes into `out`.
inline void encode(std::span<const Cell> window, int fov, const EncodingTable& table, std::span<std::uint8_t> out) {
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const auto c = static_cast<std::size_t>(table.channels);
  const std::size_t n = window.size();
  if (table.mode == ObservationMode::Rgb) {
    for (std::size_t i = 0; i < n; ++i) {
      const Cell cell = window[i];
      const Rgb col = cell.is_wall() ? colors::kWall : cell.is_object() ? table.slot_color[cell.slot()] : colors::kBackground;
      out[i * 3] = col.r;
      out[i * 3 + 1] = col.g;
      out[i * 3 + 2] = col.b;
    }
    const std::size_t center = static_cast<std::size_t>(fov / 2) * static_cast<std::size_t>(fov) + fov / 2;
    out[center * 3] = colors::kAgent.r;
    out[center * 3 + 1] = colors::kAgent.g;
    out[center * 3 + 2] = colors::kAgent.b;
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Cell cell = window[i];
    int ch = -1;
    if (cell.is_object()) {
      ch = table.slot_channel[cell.slot()];
      if (ch < 0) throw std::invalid_argument("species color is not in the observation palette");
    } else if (cell.is_wall()) {
      ch = table.wall_channel;
    }
    if (ch >= 0) out[i * c + static_cast<std::size_t>(ch)] = 1;
  }
}

/// Inverse of binary-channel encoding.
inline std::vector<Cell> decode_binary_channels(std::span<const std::uint8_t> tensor, int fov, const EncodingTable& table) {
  const auto c = static_cast<std::size_t>(table.channels);
  std::vector<Cell> window(static_cast<std::size_t>(fov) * static_cast<std::size_t>(fov), Cell::empty());
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      if (!tensor[i * c + ch]) continue;
      window[i] = static_cast<int>(ch) == table.wall_channel ? Cell::wall() : Cell::object(ch);
    }
  }
  return window;
}

struct RewardTrace {
  double decay = 0.9;
  double value = 0.0;
};

inline RewardTrace update_trace(RewardTrace trace, double reward) {
  trace.value = trace.decay * trace.value + (1.0 - trace.decay) * reward;
  return trace;
}

inline std::size_t aux_size(const ObservationSpec& spec, std::size_t biome_count) {
  return (spec.include_last_action ? kActionCount : 0) + (spec.include_last_reward ? 1 : 0) +
         (spec.reward_trace ? 1 : 0) + (spec.include_cue ? biome_count : 0);
}

inline void assemble_aux(const ObservationSpec& spec, std::optional<Action> last_action, double last_reward,
                         const std::optional<RewardTrace>& trace, std::span<const float> cue, std::vector<float>& out) {
  out.clear();
  if (spec.include_last_action) {
    for (int a = 0; a < kActionCount; ++a) {
      out.push_back(last_action && static_cast<int>(*last_action) == a ? 1.0f : 0.0f);
    }
  }
  if (spec.include_last_reward) out.push_back(static_cast<float>(last_reward));
  if (spec.reward_trace) out.push_back(static_cast<float>(trace ? trace->value : 0.0));
  if (spec.include_cue) out.insert(out.end(), cue.begin(), cue.end());
}

inline Observation assemble(std::vector<std::uint8_t> grid_tensor, int fov, int channels,
                            std::optional<Action> last_action, double last_reward,
                            const std::optional<RewardTrace>& trace, std::span<const float> cue,
                            const ObservationSpec& spec) {
  Observation obs;
  obs.fov = fov;
  obs.channels = channels;
  obs.grid = std::move(grid_tensor);
  assemble_aux(spec, last_action, last_reward, trace, cue, obs.aux);
  return obs;
}

}  // namespace forager
