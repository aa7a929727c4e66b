#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "forager/config.hpp"
#include "forager/env.hpp"
#include "forager/metrics.hpp"
#include "forager/policies.hpp"
#include "forager/render.hpp"

namespace forager {

inline constexpr int kTrajectoryVersion = 1;

/// One line of the newline-delimited trajectory log. `tick` is the clock
/// value at which the action was taken.
struct TrajectoryRecord {
  std::uint64_t tick = 0;
  Action action = Action::Up;
  double reward = 0.0;
  Position position;
  std::optional<SpeciesId> collected;
  std::size_t phase = 0;
  std::optional<Replacement> replacement;
  std::vector<float> cue;
};

inline nlohmann::json to_json(const TrajectoryRecord& r) {
  using nlohmann::json;
  json j;
  j["v"] = kTrajectoryVersion;
  j["tick"] = r.tick;
  j["action"] = std::string(action_name(r.action));
  j["reward"] = r.reward;
  j["pos"] = json::array({r.position.x, r.position.y});
  j["collected"] = r.collected ? json(*r.collected) : json(nullptr);
  j["phase"] = r.phase;
  j["replacement"] = r.replacement ? json{{"slot", r.replacement->slot},
                                          {"old", r.replacement->old_species},
                                          {"new", r.replacement->new_species}}
                                   : json(nullptr);
  j["cue"] = r.cue;
  return j;
}

/// Parses one log line, checking it against the version-1 schema.
inline TrajectoryRecord parse_trajectory_record(const std::string& line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("trajectory: malformed record: ") + e.what());
  }
  auto bad = [](const std::string& what) { return IoError("trajectory: " + what); };
  if (!j.is_object() || j.size() != 9) throw bad("record must be an object with 9 fields");
  if (j.value("v", -1) != kTrajectoryVersion) throw bad("unsupported record version");
  TrajectoryRecord r;
  try {
    r.tick = j.at("tick").get<std::uint64_t>();
    const auto a = action_from_name(j.at("action").get<std::string>());
    if (!a) throw bad("unknown action");
    r.action = *a;
    r.reward = j.at("reward").get<double>();
    const auto& pos = j.at("pos");
    if (!pos.is_array() || pos.size() != 2) throw bad("pos must be [x, y]");
    r.position = {pos[0].get<int>(), pos[1].get<int>()};
    if (!j.at("collected").is_null()) r.collected = j.at("collected").get<SpeciesId>();
    r.phase = j.at("phase").get<std::size_t>();
    if (const auto& rep = j.at("replacement"); !rep.is_null()) {
      r.replacement = Replacement{rep.at("slot").get<std::size_t>(), rep.at("old").get<SpeciesId>(),
                                  rep.at("new").get<SpeciesId>()};
    }
    r.cue = j.at("cue").get<std::vector<float>>();
  } catch (const json::exception& e) {
    throw bad(e.what());
  }
  return r;
}

inline std::vector<TrajectoryRecord> read_trajectory(std::istream& in) {
  std::vector<TrajectoryRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(parse_trajectory_record(line));
  }
  return out;
}

struct RunOptions {
  std::uint64_t steps = 1;
  std::uint64_t seed = 0;
  std::uint64_t window = 10'000;
  std::ostream* log = nullptr;
  /// Write a full-world frame every `render_every` steps into `render_dir`.
  std::uint64_t render_every = 0;
  std::string render_dir;
};

/// Drives one continuing run. Metrics are accumulated online; the task is
/// never reset.
inline RunMetrics run(const TaskConfig& config, Policy& policy, const RunOptions& opt) {
  Environment env(config, opt.seed);
  MetricsAccumulator acc(opt.window);
  if (opt.render_every && !opt.render_dir.empty()) std::filesystem::create_directories(opt.render_dir);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 0; i < opt.steps; ++i) {
    const std::uint64_t tick = env.world().tick();
    const Action a = policy.act(env);
    const StepOutcome out = env.step(a);
    acc.add(out.reward);
    if (opt.log) {
      TrajectoryRecord rec{tick, a, out.reward, out.position, out.collected, env.world().rewards().phase(),
                           out.replacement, {env.cue().begin(), env.cue().end()}};
      *opt.log << to_json(rec).dump() << '\n';
      if (!*opt.log) throw IoError("trajectory: write failed");
    }
    if (opt.render_every && (i + 1) % opt.render_every == 0) {
      const auto path = std::filesystem::path(opt.render_dir) / ("frame_" + std::to_string(env.world().tick()) + ".ppm");
      write_ppm(render_frame(env.world()), path.string());
    }
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  return acc.finish(dt.count());
}

inline RunMetrics run(const TaskConfig& config, std::string_view policy_name, std::uint64_t steps, std::uint64_t seed,
                      std::ostream* log = nullptr) {
  auto policy = make_policy(policy_name, seed);
  RunOptions opt;
  opt.steps = steps;
  opt.seed = seed;
  opt.log = log;
  return run(config, *policy, opt);
}

/// Independent runs, one per seed, spread over `threads` workers. Results
/// are in seed order.
inline std::vector<RunMetrics> run_sweep(const TaskConfig& config, std::string_view policy_name,
                                         std::uint64_t steps, const std::vector<std::uint64_t>& seeds,
                                         unsigned threads = std::thread::hardware_concurrency()) {
  std::vector<RunMetrics> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < seeds.size(); i += threads) {
        try {
          results[i] = run(config, policy_name, steps, seeds[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// ---------------------------------------------------------------------------
// Benchmarking.

struct StateSample {
  std::uint64_t tick = 0;
  std::size_t size = 0;
};

struct BenchReport {
  std::uint64_t steps = 0;
  double wall_seconds = 0.0;
  double steps_per_second = 0.0;
  std::size_t initial_objects = 0;
  std::vector<StateSample> samples;
  std::optional<std::size_t> peak_rss_kb;

  /// Largest minus smallest sample taken strictly after `after_tick`.
  std::size_t spread_after(std::uint64_t after_tick) const {
    std::size_t lo = SIZE_MAX;
    std::size_t hi = 0;
    for (const auto& s : samples) {
      if (s.tick <= after_tick) continue;
      lo = std::min(lo, s.size);
      hi = std::max(hi, s.size);
    }
    return hi >= lo ? hi - lo : 0;
  }
};

inline std::optional<std::size_t> peak_rss_kb() {
  std::ifstream status("/proc/self/status");
  std::string key;
  while (status >> key) {
    if (key == "VmHWM:") {
      std::size_t kb = 0;
      status >> kb;
      return kb;
    }
    status.ignore(4096, '\n');
  }
  return std::nullopt;
}

/// Steps the task under `policy` (constant Up when null), sampling the
/// internal state size every `sample_every` steps.
inline BenchReport bench(const TaskConfig& config, std::uint64_t steps, std::uint64_t sample_every = 1000,
                         Policy* policy = nullptr, bool sample_rss = false) {
  BenchReport report;
  Environment env(config);
  ConstantPolicy up(Action::Up);
  Policy& p = policy ? *policy : up;
  report.steps = steps;
  report.initial_objects = env.world().initial_object_count();
  if (steps == 0) return report;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t i = 1; i <= steps; ++i) {
    env.step(p.act(env));
    if (sample_every && i % sample_every == 0) report.samples.push_back({i, env.world().state_size().total()});
  }
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  report.wall_seconds = dt.count();
  report.steps_per_second = dt.count() > 0.0 ? static_cast<double>(steps) / dt.count() : 0.0;
  if (sample_rss) report.peak_rss_kb = peak_rss_kb();
  return report;
}

inline constexpr double kReferenceFps = 159'879.0;
inline constexpr double kReferenceMemoryGb = 0.1;

inline void print_report(std::ostream& os, const BenchReport& r) {
  const std::size_t first = r.samples.empty() ? 0 : r.samples.front().size;
  const std::size_t last = r.samples.empty() ? 0 : r.samples.back().size;
  os << "steps            " << r.steps << '\n'
     << "wall time (s)    " << r.wall_seconds << '\n'
     << "speed (FPS)      " << static_cast<std::uint64_t>(r.steps_per_second) << '\n'
     << "state size       first " << first << ", last " << last << ", spread " << r.spread_after(0)
     << " (initial objects " << r.initial_objects << ")\n";
  if (r.peak_rss_kb) os << "memory (GB)      " << static_cast<double>(*r.peak_rss_kb) / (1024.0 * 1024.0) << '\n';
  os << "reference        " << static_cast<std::uint64_t>(kReferenceFps) << " FPS at " << kReferenceMemoryGb
     << " GB (reference desktop figure)\n";
}

}  // namespace forager
