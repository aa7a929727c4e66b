#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace forager {

struct Position {
  int x = 0;
  int y = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct Offset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
  Offset operator-() const { return {-dx, -dy}; }
};

struct Dims {
  int width = 0;
  int height = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  std::size_t index(Position p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x);
  }
  Position position(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width)),
            static_cast<int>(index / static_cast<std::size_t>(width))};
  }
  bool contains(Position p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
};

// Half-open rectangle [x0, x1) x [y0, y1).
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  std::size_t area() const {
    return empty() ? 0 : static_cast<std::size_t>(width()) * static_cast<std::size_t>(height());
  }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool contains(Position p) const { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
  bool overlaps(const Rect& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
  Position at(std::size_t i) const {
    return {x0 + static_cast<int>(i % static_cast<std::size_t>(width())),
            y0 + static_cast<int>(i / static_cast<std::size_t>(width()))};
  }
};

// y grows downward: Up is dy = -1.
enum class Action : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr int kActionCount = 4;
inline constexpr std::array<Action, kActionCount> kAllActions{Action::Up, Action::Down, Action::Left,
                                                              Action::Right};

constexpr Offset offset_of(Action a) {
  switch (a) {
    case Action::Up: return {0, -1};
    case Action::Down: return {0, 1};
    case Action::Left: return {-1, 0};
    case Action::Right: return {1, 0};
  }
  return {};
}

constexpr std::string_view action_name(Action a) {
  switch (a) {
    case Action::Up: return "up";
    case Action::Down: return "down";
    case Action::Left: return "left";
    case Action::Right: return "right";
  }
  return "?";
}

inline std::optional<Action> action_from_index(int i) {
  if (i < 0 || i >= kActionCount) return std::nullopt;
  return static_cast<Action>(i);
}

inline std::optional<Action> action_from_name(std::string_view name) {
  for (Action a : kAllActions) {
    if (action_name(a) == name) return a;
  }
  return std::nullopt;
}

constexpr int wrap_coord(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

// Torus addition, componentwise modulo the world size.
constexpr Position wrap(Position p, Offset delta, Dims dims) {
  return {wrap_coord(p.x + delta.dx, dims.width), wrap_coord(p.y + delta.dy, dims.height)};
}

// Shortest wrap-around Manhattan distance; a lower bound on any torus path length.
inline int torus_manhattan(Position a, Position b, Dims dims) {
  auto axis = [](int u, int v, int n) {
    const int d = u > v ? u - v : v - u;
    return d < n - d ? d : n - d;
  };
  return axis(a.x, b.x, dims.width) + axis(a.y, b.y, dims.height);
}

}  // namespace forager
