#include <gtest/gtest.h>

#include <array>

#include "forager/forager.hpp"
#include "reference.hpp"
#include "test_util.hpp"

namespace forager {
namespace {

using testing::add_species;
using testing::blank;

std::vector<CellClass> random_maze(Rng& rng, Dims dims, double wall_p, double goal_p) {
  std::vector<CellClass> cls(dims.area(), CellClass::Open);
  for (auto& c : cls) {
    const double u = rng.uniform01();
    c = u < wall_p ? CellClass::Blocked : u < wall_p + goal_p ? CellClass::Goal : CellClass::Open;
  }
  return cls;
}

TEST(RandomPolicy, UniformOverActions) {
  Environment env(testing::blank(5, 5, {2, 2}), 0);
  RandomPolicy p(17);
  std::array<int, 4> counts{};
  const int n = 100'000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(p.act(env))];
  for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 0.01);
}

TEST(RandomPolicy, SameSeedSameActions) {
  Environment env(testing::blank(5, 5, {2, 2}), 0);
  RandomPolicy a(3), b(3), c(4);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const Action x = a.act(env);
    EXPECT_EQ(x, b.act(env));
    differs |= x != c.act(env);
  }
  EXPECT_TRUE(differs);
}

TEST(Bfs, NeighborAcrossWrap) {
  const Dims dims{15, 15};
  std::vector<CellClass> cls(dims.area(), CellClass::Open);
  cls[dims.index({0, 14})] = CellClass::Goal;
  const auto step = bfs_torus(dims, {0, 0}, cls);
  ASSERT_TRUE(step);
  EXPECT_EQ(step->distance, 1);
  EXPECT_EQ(step->first, Action::Up);
  EXPECT_EQ(step->goal, (Position{0, 14}));
}

TEST(Bfs, EnclosedGoalUnreachable) {
  const Dims dims{9, 9};
  std::vector<CellClass> cls(dims.area(), CellClass::Open);
  cls[dims.index({4, 4})] = CellClass::Goal;
  for (Position p : {Position{3, 4}, {5, 4}, {4, 3}, {4, 5}}) cls[dims.index(p)] = CellClass::Blocked;
  EXPECT_FALSE(bfs_torus(dims, {0, 0}, cls));
}

TEST(Bfs, StartIsNeverAGoal) {
  const Dims dims{5, 5};
  std::vector<CellClass> cls(dims.area(), CellClass::Open);
  cls[dims.index({2, 2})] = CellClass::Goal;
  EXPECT_FALSE(bfs_torus(dims, {2, 2}, cls));
}

TEST(Bfs, TieBreaksInActionOrder) {
  const Dims dims{9, 9};
  std::vector<CellClass> cls(dims.area(), CellClass::Open);
  cls[dims.index({6, 6})] = CellClass::Goal;  // reachable by Down-first or Right-first
  const auto step = bfs_torus(dims, {4, 4}, cls);
  ASSERT_TRUE(step);
  EXPECT_EQ(step->first, Action::Down);
  EXPECT_EQ(step->distance, 4);
}

TEST(Bfs, MatchesReferenceOnRandomMazes) {
  Rng rng(101);
  BfsWorkspace ws;
  for (int trial = 0; trial < 300; ++trial) {
    const Dims dims{12, 12};
    const auto cls = random_maze(rng, dims, 0.3, 0.03);
    const Position start{static_cast<int>(rng.below(12)), static_cast<int>(rng.below(12))};
    for (bool torus : {true, false}) {
      auto classify = [&](std::size_t i) { return cls[i]; };
      const auto got = torus ? bfs_torus(dims, start, classify, ws) : bfs_bounded(dims, start, classify, ws);
      const auto want = reference::nearest_goal(dims, start, cls, torus);
      ASSERT_EQ(got.has_value(), want.has_value()) << "trial " << trial << " torus " << torus;
      if (!got) continue;
      EXPECT_EQ(got->distance, want->distance);
      EXPECT_EQ(got->first, want->first);
      EXPECT_EQ(cls[dims.index(got->goal)], CellClass::Goal);
    }
  }
}

TEST(Bfs, DistanceIsSymmetric) {
  Rng rng(7);
  BfsWorkspace ws;
  for (int trial = 0; trial < 100; ++trial) {
    const Dims dims{10, 8};
    auto walls = random_maze(rng, dims, 0.25, 0.0);
    const Position a{static_cast<int>(rng.below(10)), static_cast<int>(rng.below(8))};
    const Position b{static_cast<int>(rng.below(10)), static_cast<int>(rng.below(8))};
    if (a == b) continue;
    walls[dims.index(a)] = CellClass::Open;
    walls[dims.index(b)] = CellClass::Open;
    auto to = [&](Position from, Position goal) {
      return bfs_torus(dims, from, [&](std::size_t i) { return i == dims.index(goal) ? CellClass::Goal : walls[i]; }, ws);
    };
    const auto ab = to(a, b);
    const auto ba = to(b, a);
    ASSERT_EQ(ab.has_value(), ba.has_value());
    if (ab) {
      EXPECT_EQ(ab->distance, ba->distance);
    }
  }
}

TEST(Bfs, ManhattanLowerBoundTightWithoutWalls) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Dims dims{static_cast<int>(rng.uniform_int(2, 20)), static_cast<int>(rng.uniform_int(2, 20))};
    auto cls = random_maze(rng, dims, 0.2, 0.0);
    const Position s = dims.position(rng.below(dims.area()));
    const Position g = dims.position(rng.below(dims.area()));
    if (s == g) continue;
    cls[dims.index(s)] = CellClass::Open;
    cls[dims.index(g)] = CellClass::Goal;
    if (const auto step = bfs_torus(dims, s, cls)) {
      EXPECT_GE(step->distance, torus_manhattan(s, g, dims));
    }
    std::vector<CellClass> open(dims.area(), CellClass::Open);
    open[dims.index(g)] = CellClass::Goal;
    const auto free = bfs_torus(dims, s, open);
    ASSERT_TRUE(free);
    EXPECT_EQ(free->distance, torus_manhattan(s, g, dims));
  }
}

TEST(Oracle, AvoidsNegativeObjects) {
  // Goal two cells right; a negative object sits directly between.
  auto cfg = blank(9, 9, {2, 4});
  add_species(cfg, "good", 5.0, SpawnRule::at({{4, 4}}));
  add_species(cfg, "bad", -1.0, SpawnRule::at({{3, 4}}));
  Environment env(cfg, 0);
  OracleSearchPolicy p(0);
  double total = 0;
  for (int i = 0; i < 4; ++i) total += env.step(p.act(env)).reward;
  EXPECT_EQ(total, 5.0);
  EXPECT_EQ(env.world().consumption_count(1), 0);
}

TEST(Oracle, FallsBackToUnblockedRandomMove) {
  auto cfg = blank(5, 5, {2, 2});
  cfg.walls = {{2, 1}, {1, 2}};
  add_species(cfg, "bad", -1.0, SpawnRule::at({{3, 2}}));
  Environment env(cfg, 0);
  OracleSearchPolicy p(0);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(p.act(env), Action::Down);
}

TEST(Oracle, SurroundedPicksAnyAction) {
  auto cfg = blank(5, 5, {2, 2});
  cfg.walls = {{2, 1}, {1, 2}, {3, 2}, {2, 3}};
  Environment env(cfg, 0);
  OracleSearchPolicy p(0);
  std::array<int, 4> seen{};
  for (int i = 0; i < 400; ++i) ++seen[static_cast<std::size_t>(p.act(env))];
  for (int s : seen) EXPECT_GT(s, 0);
}

TEST(Oracle, RetargetsRightAfterSwitch) {
  SwitchOptions o;
  o.period = 200;
  Environment env(build_two_biome_switch(o, 0), 0);
  OracleSearchPolicy p(0);
  while (env.world().tick() < 200) env.step(p.act(env));
  // Phase 1: only yellow-bottom (slot 3) pays positively, so every later
  // collection within the phase is of that slot.
  ASSERT_EQ(env.world().rewards().phase(), 1u);
  int collected = 0;
  while (env.world().tick() < 400) {
    const auto out = env.step(p.act(env));
    if (out.collected_slot && env.world().tick() < 400) {
      EXPECT_EQ(*out.collected_slot, 3u) << "tick " << env.world().tick();
      ++collected;
    }
  }
  EXPECT_GT(collected, 0);
}

TEST(Nearest, HeadsForVisibleObject) {
  auto cfg = blank(15, 15, {7, 7});
  cfg.observation.fov = 5;
  add_species(cfg, "good", 1.0, SpawnRule::at({{9, 6}}));
  Environment env(cfg, 0);
  SearchNearestPolicy p(0);
  EXPECT_EQ(p.act(env), Action::Up);
  env.step(Action::Up);
  EXPECT_EQ(p.act(env), Action::Right);
}

TEST(Nearest, IgnoresObjectsOutsideWindow) {
  // The object is two cells away via the torus but outside the 3x3 window.
  auto cfg = blank(4, 4, {1, 1});
  cfg.observation.fov = 3;
  add_species(cfg, "good", 1.0, SpawnRule::at({{3, 3}}));
  Environment env(cfg, 0);
  SearchNearestPolicy p(9);
  std::array<int, 4> seen{};
  for (int i = 0; i < 400; ++i) ++seen[static_cast<std::size_t>(p.act(env))];
  for (int s : seen) EXPECT_GT(s, 0);
}

TEST(Nearest, EmptyWindowIsRandom) {
  auto cfg = blank(21, 21, {10, 10});
  cfg.observation.fov = 5;
  add_species(cfg, "far", 1.0, SpawnRule::at({{0, 0}}));
  Environment env(cfg, 0);
  SearchNearestPolicy p(2);
  std::array<int, 4> seen{};
  for (int i = 0; i < 4000; ++i) ++seen[static_cast<std::size_t>(p.act(env))];
  for (int s : seen) EXPECT_NEAR(s / 4000.0, 0.25, 0.03);
}

TEST(Ordering, MorelFovSevenOracleAheadOfNearest) {
  const auto cfg = build_two_biome_morel(7);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double oracle = run(cfg, "oracle", 100'000, seed).mean_reward();
    const double nearest = run(cfg, "nearest", 100'000, seed).mean_reward();
    const double random = run(cfg, "random", 100'000, seed).mean_reward();
    EXPECT_GT(oracle, nearest) << "seed " << seed;
    EXPECT_GT(nearest, random) << "seed " << seed;
  }
}

TEST(Policies, FactoryNames) {
  for (const auto& name : policy_names()) EXPECT_EQ(make_policy(name, 0)->name(), name);
  EXPECT_THROW(make_policy("greedy", 0), ConfigError);
}

}  // namespace
}  // namespace forager
