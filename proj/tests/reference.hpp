#pragma once

// Slow, independent re-implementations used as oracles by the tests and the
// acceptance binary.

#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "forager/forager.hpp"

namespace forager::reference {

// Tile the grid 3x3 so any window around the agent is a plain crop.
inline std::vector<Cell> window(const World& w, int fov) {
  const Dims d = w.dims();
  const int tw = 3 * d.width;
  const int th = 3 * d.height;
  std::vector<Cell> tiled(static_cast<std::size_t>(tw) * th);
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) tiled[static_cast<std::size_t>(y) * tw + x] = w.at({x % d.width, y % d.height});
  }
  std::vector<Cell> out;
  const int half = fov / 2;
  for (int r = 0; r < fov; ++r) {
    for (int c = 0; c < fov; ++c) {
      int x = w.agent().x + d.width + c - half;
      int y = w.agent().y + d.height + r - half;
      // Windows wider than one period step back into the tiled copy.
      while (x < 0) x += d.width;
      while (y < 0) y += d.height;
      while (x >= tw) x -= d.width;
      while (y >= th) y -= d.height;
      out.push_back(tiled[static_cast<std::size_t>(y) * tw + x]);
    }
  }
  return out;
}

struct Answer {
  int distance = 0;
  Action first = Action::Up;
};

// Dijkstra over an explicitly built adjacency list. Returns the shortest
// distance from `start` to any Goal (start excluded) and the earliest action
// in U, D, L, R order that begins a shortest path.
inline std::optional<Answer> nearest_goal(Dims dims, Position start, const std::vector<CellClass>& cls, bool torus) {
  const std::size_t n = dims.area();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t u = 0; u < n; ++u) {
    const Position p = dims.position(u);
    for (Action a : kAllActions) {
      const Offset o = offset_of(a);
      Position q{p.x + o.dx, p.y + o.dy};
      if (torus) {
        q = wrap(p, o, dims);
      } else if (!dims.contains(q)) {
        continue;
      }
      if (cls[dims.index(q)] != CellClass::Blocked) adj[u].push_back(dims.index(q));
    }
  }
  const std::size_t s = dims.index(start);
  // Multi-source distances to the nearest goal, on the reversed graph.
  constexpr int inf = std::numeric_limits<int>::max();
  std::vector<std::vector<std::size_t>> radj(n);
  for (std::size_t u = 0; u < n; ++u) {
    if (cls[u] == CellClass::Blocked && u != s) continue;
    for (std::size_t v : adj[u]) radj[v].push_back(u);
  }
  std::vector<int> to_goal(n, inf);
  using Item = std::pair<int, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t u = 0; u < n; ++u) {
    if (cls[u] == CellClass::Goal && u != s) {
      to_goal[u] = 0;
      pq.push({0, u});
    }
  }
  while (!pq.empty()) {
    const auto [d, v] = pq.top();
    pq.pop();
    if (d != to_goal[v]) continue;
    for (std::size_t u : radj[v]) {
      if (u == s) continue;  // paths never pass back through the start
      if (d + 1 < to_goal[u]) {
        to_goal[u] = d + 1;
        pq.push({d + 1, u});
      }
    }
  }
  std::optional<Answer> best;
  for (Action a : kAllActions) {
    const Offset o = offset_of(a);
    Position q{start.x + o.dx, start.y + o.dy};
    if (torus) {
      q = wrap(start, o, dims);
    } else if (!dims.contains(q)) {
      continue;
    }
    const std::size_t v = dims.index(q);
    if (v == s || cls[v] == CellClass::Blocked || to_goal[v] == inf) continue;
    const int d = to_goal[v] + 1;
    if (!best || d < best->distance) best = Answer{d, a};
  }
  return best;
}

}  // namespace forager::reference
