#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forager/bfs.hpp"
#include "forager/config.hpp"
#include "forager/env.hpp"
#include "forager/rng.hpp"
#include "forager/world.hpp"

namespace forager {

namespace detail {

inline CellClass classify(Cell c, std::span<const double> rewards) {
  if (c.is_wall()) return CellClass::Blocked;
  if (!c.is_object()) return CellClass::Open;
  const double r = rewards[c.slot()];
  return r > 0.0 ? CellClass::Goal : r < 0.0 ? CellClass::Blocked : CellClass::Open;
}

// Uniform over the actions whose target is not blocked; uniform over all
// four when every neighbor is blocked.
template <class NeighborClass>
Action random_unblocked(Rng& rng, NeighborClass&& neighbor) {
  std::array<Action, kActionCount> options{};
  std::size_t n = 0;
  for (Action a : kAllActions) {
    if (neighbor(a) != CellClass::Blocked) options[n++] = a;
  }
  if (n == 0) return kAllActions[rng.below(kActionCount)];
  return options[rng.below(n)];
}

}  // namespace detail

inline Action random_action(Rng& rng) { return kAllActions[rng.below(kActionCount)]; }

/// Privileged search over the whole torus: walk toward the nearest object
/// with strictly positive current reward, treating walls and strictly
/// negative objects as impassable.
inline Action oracle_search(const World& world, std::span<const double> rewards, Rng& rng, BfsWorkspace& ws) {
  const auto cells = world.cells();
  const Dims dims = world.dims();
  auto cls = [&](std::size_t i) { return detail::classify(cells[i], rewards); };
  if (auto step = bfs_torus(dims, world.agent(), cls, ws)) return step->first;
  return detail::random_unblocked(rng, [&](Action a) { return cls(dims.index(wrap(world.agent(), offset_of(a), dims))); });
}

/// The same search confined to the agent's field-of-view window, without
/// wrapping at the window edges.
inline Action search_nearest(std::span<const Cell> window, int fov, std::span<const double> rewards, Rng& rng,
                             BfsWorkspace& ws) {
  const Dims dims{fov, fov};
  const Position center{fov / 2, fov / 2};
  auto cls = [&](std::size_t i) { return detail::classify(window[i], rewards); };
  if (auto step = bfs_bounded(dims, center, cls, ws)) return step->first;
  return detail::random_unblocked(rng, [&](Action a) {
    const Offset d = offset_of(a);
    const Position p{center.x + d.dx, center.y + d.dy};
    return dims.contains(p) ? cls(dims.index(p)) : CellClass::Open;
  });
}

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const Environment& env) = 0;
  virtual std::string_view name() const = 0;
};

class ConstantPolicy final : public Policy {
 public:
  explicit ConstantPolicy(Action a = Action::Up) : action_(a) {}
  Action act(const Environment&) override { return action_; }
  std::string_view name() const override { return "up"; }

 private:
  Action action_;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(make_stream(seed, Stream::Policy)) {}
  Action act(const Environment&) override { return random_action(rng_); }
  std::string_view name() const override { return "random"; }

 private:
  Rng rng_;
};

class OracleSearchPolicy final : public Policy {
 public:
  explicit OracleSearchPolicy(std::uint64_t seed) : rng_(make_stream(seed, Stream::Policy)) {}
  Action act(const Environment& env) override {
    return oracle_search(env.world(), env.world().rewards().values(), rng_, ws_);
  }
  std::string_view name() const override { return "oracle"; }

 private:
  Rng rng_;
  BfsWorkspace ws_;
};

class SearchNearestPolicy final : public Policy {
 public:
  explicit SearchNearestPolicy(std::uint64_t seed) : rng_(make_stream(seed, Stream::Policy)) {}
  Action act(const Environment& env) override {
    return search_nearest(env.window(), env.fov(), env.world().rewards().values(), rng_, ws_);
  }
  std::string_view name() const override { return "nearest"; }

 private:
  Rng rng_;
  BfsWorkspace ws_;
};

inline std::vector<std::string> policy_names() { return {"random", "nearest", "oracle", "up"}; }

inline std::unique_ptr<Policy> make_policy(std::string_view name, std::uint64_t seed) {
  if (name == "random") return std::make_unique<RandomPolicy>(seed);
  if (name == "nearest") return std::make_unique<SearchNearestPolicy>(seed);
  if (name == "oracle") return std::make_unique<OracleSearchPolicy>(seed);
  if (name == "up") return std::make_unique<ConstantPolicy>(Action::Up);
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

}  // namespace forager
