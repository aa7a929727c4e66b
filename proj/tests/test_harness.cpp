#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "forager/forager.hpp"
#include "test_util.hpp"

namespace forager {
namespace {

using testing::add_species;
using testing::blank;

TEST(Ema, ClosedFormForConstantReward) {
  EmaReward ema;
  for (int t = 1; t <= 10'000; ++t) {
    ema.update(1.0);
    if (t % 1000 == 0) {
      const double expected = 1.0 - std::pow(0.999, t);
      EXPECT_NEAR(ema.value(), expected, 1e-12 * expected) << t;
    }
  }
}

TEST(Ema, ZeroRewardsStayZero) {
  const auto m = run(blank(6, 6, {3, 3}), "random", 5000, 1);
  EXPECT_EQ(m.ema_reward, 0.0);
  EXPECT_EQ(m.cumulative_reward, 0.0);
  EXPECT_EQ(m.steps, 5000u);
}

TEST(Metrics, WindowMeans) {
  MetricsAccumulator acc(4);
  for (double r : {1.0, 1.0, 1.0, 1.0, 0.0, 2.0, 0.0, 2.0, 5.0}) acc.add(r);
  const auto m = acc.finish(1.0);
  EXPECT_EQ(m.window_means, (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(m.cumulative_reward, 13.0);
  EXPECT_EQ(m.steps, 9u);
  EXPECT_DOUBLE_EQ(m.mean_reward(), 13.0 / 9.0);
}

TEST(Run, DeterministicForSeed) {
  const auto cfg = build_two_biome_morel(7);
  for (const char* policy : {"random", "nearest", "oracle"}) {
    auto a = run(cfg, policy, 5000, 11);
    auto b = run(cfg, policy, 5000, 11);
    a.wall_seconds = b.wall_seconds = 0;
    a.steps_per_second = b.steps_per_second = 0;
    EXPECT_EQ(a, b) << policy;
  }
}

TEST(Log, OneRecordPerStepAndReplays) {
  const auto cfg = build_unending_four(5);
  std::stringstream log;
  run(cfg, "oracle", 3000, 5, &log);
  const auto records = read_trajectory(log);
  ASSERT_EQ(records.size(), 3000u);
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].tick, i);

  // Feeding the logged actions back reproduces the rewards and positions.
  World w(cfg, 5);
  for (const auto& r : records) {
    const auto out = w.step(r.action);
    ASSERT_EQ(out.reward, r.reward) << r.tick;
    ASSERT_EQ(out.position, r.position);
    ASSERT_EQ(out.collected, r.collected);
    ASSERT_EQ(w.rewards().phase(), r.phase);
  }
}

TEST(Log, RecordSchema) {
  TrajectoryRecord r{7, Action::Left, -1.5, {3, 4}, 2u, 1, Replacement{1, 2, 5}, {0.0f, 1.0f}};
  const auto j = to_json(r);
  for (const char* key : {"v", "tick", "action", "reward", "pos", "collected", "phase", "replacement", "cue"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["action"], "left");
  const auto back = parse_trajectory_record(j.dump());
  EXPECT_EQ(back.tick, 7u);
  EXPECT_EQ(back.action, Action::Left);
  EXPECT_EQ(back.position, (Position{3, 4}));
  EXPECT_EQ(back.collected, 2u);
  ASSERT_TRUE(back.replacement);
  EXPECT_EQ(back.replacement->new_species, 5u);
  EXPECT_EQ(back.cue, (std::vector<float>{0.0f, 1.0f}));
}

TEST(Log, MalformedRecordsRejected) {
  EXPECT_THROW(parse_trajectory_record("{"), IoError);
  EXPECT_THROW(parse_trajectory_record("{\"v\": 1}"), IoError);
  auto j = to_json(TrajectoryRecord{});
  j["v"] = 2;
  EXPECT_THROW(parse_trajectory_record(j.dump()), IoError);
  j = to_json(TrajectoryRecord{});
  j["action"] = "jump";
  EXPECT_THROW(parse_trajectory_record(j.dump()), IoError);
}

TEST(Bench, ZeroStepsIsEmpty) {
  const auto r = bench(build_two_biome_morel(), 0);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_TRUE(r.samples.empty());
  EXPECT_EQ(r.spread_after(0), 0u);
}

TEST(Bench, SamplesAtInterval) {
  const auto r = bench(build_two_biome_morel(), 5000, 500, nullptr, true);
  ASSERT_EQ(r.samples.size(), 10u);
  EXPECT_EQ(r.samples.front().tick, 500u);
  EXPECT_LE(r.spread_after(1000), r.initial_objects);
  EXPECT_TRUE(r.peak_rss_kb.has_value());
  std::ostringstream os;
  print_report(os, r);
  EXPECT_NE(os.str().find("159879"), std::string::npos);
}

TEST(Render, SmallWorldPixels) {
  auto cfg = blank(4, 4, {0, 0});
  cfg.walls = {{3, 3}};
  add_species(cfg, "s", 1.0, SpawnRule::at({{2, 0}}), RespawnRule::never(), std::nullopt, {10, 200, 30});
  cfg.observation.fov = 1;
  const World w(cfg, 0);
  const auto img = render_frame(w, 2);
  EXPECT_EQ(img.width, 8);
  EXPECT_EQ(img.height, 8);
  EXPECT_EQ(img.pixel(0, 0), colors::kAgent);
  EXPECT_EQ(img.pixel(1, 1), colors::kAgent);
  EXPECT_EQ(img.pixel(4, 0), (Rgb{10, 200, 30}));
  EXPECT_EQ(img.pixel(7, 7), colors::kWall);
  EXPECT_EQ(img.pixel(2, 4), colors::kBackground);
}

TEST(Render, OverlayWrapsAroundAgent) {
  auto cfg = blank(6, 6, {0, 0});
  cfg.observation.fov = 3;
  const World w(cfg, 0);
  const auto img = render_frame(w, 1);
  const Rgb tinted = blend_half(colors::kBackground, colors::kFovOverlay);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      const bool near_x = x == 0 || x == 1 || x == 5;
      const bool near_y = y == 0 || y == 1 || y == 5;
      const Rgb expected = (x == 0 && y == 0) ? colors::kAgent : (near_x && near_y) ? tinted : colors::kBackground;
      EXPECT_EQ(img.pixel(x, y), expected) << x << "," << y;
    }
  }
  const auto plain = render_frame(w, 1, false);
  EXPECT_EQ(plain.pixel(1, 1), colors::kBackground);
}

TEST(Render, UsesSpeciesColors) {
  const World w(build_unending_four(2), 2);
  const auto img = render_frame(w, 1, false);
  for (int y = 0; y < w.height(); ++y) {
    for (int x = 0; x < w.width(); ++x) {
      const Cell c = w.at({x, y});
      if (c.is_object()) {
        ASSERT_EQ(img.pixel(x, y), w.species_color(c.slot()));
      }
    }
  }
}

TEST(Render, WritesPpm) {
  const auto dir = std::filesystem::temp_directory_path() / "forager_render_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "frame.ppm").string();
  const World w(build_two_biome_morel(), 0);
  write_ppm(render_frame(w, 2), path);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  in >> magic >> width >> height >> maxval;
  EXPECT_EQ(magic, "P6");
  EXPECT_EQ(width, 60);
  EXPECT_EQ(height, 30);
  EXPECT_EQ(maxval, 255);
  EXPECT_EQ(std::filesystem::file_size(path), std::string("P6\n60 30\n255\n").size() + 60u * 30u * 3u);
  EXPECT_THROW(write_ppm(render_frame(w, 1), (dir / "missing" / "x.ppm").string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Run, RenderEveryWritesFrames) {
  const auto dir = std::filesystem::temp_directory_path() / "forager_run_frames";
  std::filesystem::remove_all(dir);
  RandomPolicy p(0);
  RunOptions opt;
  opt.steps = 30;
  opt.render_every = 10;
  opt.render_dir = dir.string();
  run(build_two_biome_morel(), p, opt);
  std::size_t frames = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) frames += e.path().extension() == ".ppm";
  EXPECT_EQ(frames, 3u);
  std::filesystem::remove_all(dir);
}

TEST(Sweep, MatchesSequentialRuns) {
  const auto cfg = build_two_biome_morel(5);
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  auto par = run_sweep(cfg, "nearest", 3000, seeds, 3);
  ASSERT_EQ(par.size(), seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto seq = run(cfg, "nearest", 3000, seeds[i]);
    EXPECT_EQ(par[i].cumulative_reward, seq.cumulative_reward);
    EXPECT_EQ(par[i].ema_reward, seq.ema_reward);
  }
}

}  // namespace
}  // namespace forager
