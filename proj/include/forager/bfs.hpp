#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "forager/geometry.hpp"

namespace forager {

enum class CellClass : std::uint8_t { Open, Goal, Blocked };

struct PathStep {
  Action first = Action::Up;
  int distance = 0;
  Position goal;
};

/// Scratch buffers reused across searches. Visited marks are generation
/// stamps, so a search never clears the full grid.
class BfsWorkspace {
 public:
  void prepare(std::size_t cells) {
    if (stamp_.size() != cells) {
      stamp_.assign(cells, 0);
      first_.assign(cells, 0);
      dist_.assign(cells, 0);
      generation_ = 0;
      queue_.reserve(cells);
    }
    if (++generation_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      generation_ = 1;
    }
    queue_.clear();
  }

 private:
  template <bool Wrap, class Classify>
  friend std::optional<PathStep> bfs_grid(Dims, Position, Classify&&, BfsWorkspace&);

  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> first_;
  std::vector<std::int32_t> dist_;
  std::vector<std::uint32_t> queue_;
  std::uint32_t generation_ = 0;
};

/// Breadth-first search from `start` to the nearest Goal cell, never
/// entering Blocked cells. `classify(index)` labels a cell by its row-major
/// index. Neighbors are expanded Up, Down, Left, Right, so among shortest
/// paths the earliest first action in that order wins. The start cell itself
/// is never a goal.
template <bool Wrap, class Classify>
std::optional<PathStep> bfs_grid(Dims dims, Position start, Classify&& classify, BfsWorkspace& ws) {
  ws.prepare(dims.area());
  const std::uint32_t gen = ws.generation_;
  const auto s = static_cast<std::uint32_t>(dims.index(start));
  ws.stamp_[s] = gen;
  ws.dist_[s] = 0;
  ws.queue_.push_back(s);
  for (std::size_t head = 0; head < ws.queue_.size(); ++head) {
    const std::uint32_t u = ws.queue_[head];
    const Position p = dims.position(u);
    for (Action a : kAllActions) {
      const Offset d = offset_of(a);
      Position np{p.x + d.dx, p.y + d.dy};
      if constexpr (Wrap) {
        if (np.x < 0) np.x += dims.width;
        else if (np.x >= dims.width) np.x -= dims.width;
        if (np.y < 0) np.y += dims.height;
        else if (np.y >= dims.height) np.y -= dims.height;
      } else {
        if (!dims.contains(np)) continue;
      }
      const auto q = static_cast<std::uint32_t>(dims.index(np));
      if (ws.stamp_[q] == gen) continue;
      ws.stamp_[q] = gen;
      const CellClass cls = classify(static_cast<std::size_t>(q));
      if (cls == CellClass::Blocked) continue;
      const std::uint8_t first = u == s ? static_cast<std::uint8_t>(a) : ws.first_[u];
      const std::int32_t dist = ws.dist_[u] + 1;
      if (cls == CellClass::Goal) return PathStep{static_cast<Action>(first), dist, np};
      ws.first_[q] = first;
      ws.dist_[q] = dist;
      ws.queue_.push_back(q);
    }
  }
  return std::nullopt;
}

template <class Classify>
std::optional<PathStep> bfs_torus(Dims dims, Position start, Classify&& classify, BfsWorkspace& ws) {
  return bfs_grid<true>(dims, start, std::forward<Classify>(classify), ws);
}

template <class Classify>
std::optional<PathStep> bfs_bounded(Dims dims, Position start, Classify&& classify, BfsWorkspace& ws) {
  return bfs_grid<false>(dims, start, std::forward<Classify>(classify), ws);
}

/// Convenience form over a precomputed row-major class map.
inline std::optional<PathStep> bfs_torus(Dims dims, Position start, std::span<const CellClass> classes) {
  BfsWorkspace ws;
  return bfs_torus(dims, start, [&](std::size_t i) { return classes[i]; }, ws);
}

}  // namespace forager
