// Command-line front end: run baselines, benchmark, render and validate configs.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "forager/forager.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kIoError = 2 };

struct Source {
  std::string preset;
  std::string config_path;
};

forager::TaskConfig load(const Source& src, std::optional<std::uint64_t> seed) {
  if (!src.config_path.empty()) {
    forager::TaskConfig c = forager::load_config(src.config_path);
    if (seed) c.seed = *seed;
    return c;
  }
  return forager::make_preset(src.preset, seed.value_or(0));
}

void add_source(CLI::App* cmd, Source& src) {
  auto* preset = cmd->add_option("--preset", src.preset, "Preset name (see `presets`)");
  auto* config = cmd->add_option("--config", src.config_path, "Path to a JSON task config");
  preset->excludes(config);
  config->excludes(preset);
}

nlohmann::json metrics_json(const forager::RunMetrics& m) {
  return {{"steps", m.steps},
          {"ema_reward", m.ema_reward},
          {"cumulative_reward", m.cumulative_reward},
          {"mean_reward", m.mean_reward()},
          {"window", m.window},
          {"window_means", m.window_means},
          {"wall_seconds", m.wall_seconds},
          {"steps_per_second", m.steps_per_second}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forager continual-RL gridworld simulator"};
  app.require_subcommand(1);

  // run
  Source run_src;
  std::string policy = "random";
  std::uint64_t run_steps = 10'000;
  std::optional<std::uint64_t> run_seed;
  std::string log_path;
  std::uint64_t render_every = 0;
  std::string render_dir;
  std::uint64_t window = 10'000;
  auto* run_cmd = app.add_subcommand("run", "Run a baseline policy and print metrics as JSON");
  add_source(run_cmd, run_src);
  run_cmd->add_option("--policy", policy, "random | nearest | oracle | up")->capture_default_str();
  run_cmd->add_option("--steps", run_steps, "Number of steps")->capture_default_str();
  run_cmd->add_option("--seed", run_seed, "Run seed");
  run_cmd->add_option("--log", log_path, "Write a newline-delimited trajectory log here");
  run_cmd->add_option("--render-every", render_every, "Write a frame every K steps");
  run_cmd->add_option("--out", render_dir, "Directory for rendered frames");
  run_cmd->add_option("--window", window, "Window size for windowed mean rewards")->capture_default_str();

  // bench
  Source bench_src;
  std::uint64_t bench_steps = 1'000'000;
  std::uint64_t sample_every = 1000;
  bool rss = false;
  auto* bench_cmd = app.add_subcommand("bench", "Step under the constant-Up policy and report speed and state size");
  add_source(bench_cmd, bench_src);
  bench_cmd->add_option("--steps", bench_steps, "Number of steps")->capture_default_str();
  bench_cmd->add_option("--sample-every", sample_every, "State-size sampling interval")->capture_default_str();
  bench_cmd->add_flag("--rss", rss, "Also report peak resident memory");

  // render
  Source render_src;
  std::optional<std::uint64_t> render_seed;
  std::string render_out;
  int cell_px = 8;
  auto* render_cmd = app.add_subcommand("render", "Render the initial world to a PPM image");
  add_source(render_cmd, render_src);
  render_cmd->add_option("--seed", render_seed, "Seed");
  render_cmd->add_option("--out", render_out, "Output .ppm path")->required();
  render_cmd->add_option("--cell-px", cell_px, "Pixels per cell")->capture_default_str()->check(CLI::Range(1, 64));

  // presets / validate / export
  auto* presets_cmd = app.add_subcommand("presets", "List preset names");
  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a JSON task config");
  validate_cmd->add_option("--config", validate_path, "Config path")->required();
  Source export_src;
  std::optional<std::uint64_t> export_seed;
  auto* export_cmd = app.add_subcommand("export", "Print a preset as a JSON task config");
  export_cmd->add_option("--preset", export_src.preset, "Preset name")->required();
  export_cmd->add_option("--seed", export_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*presets_cmd) {
      for (const auto& name : forager::preset_names()) std::cout << name << '\n';
      std::cout << "forager-two-biome-morel-fov<N>\n";
      return kOk;
    }
    if (*validate_cmd) {
      const auto c = forager::load_config(validate_path);
      std::cout << "ok: " << c.world.width << "x" << c.world.height << ", " << c.species.size() << " species\n";
      return kOk;
    }
    if (*export_cmd) {
      std::cout << forager::serialize_config(load(export_src, export_seed));
      return kOk;
    }
    if (*run_cmd) {
      if (run_src.preset.empty() && run_src.config_path.empty()) throw forager::ConfigError("--preset or --config required");
      const auto config = load(run_src, run_seed);
      const std::uint64_t seed = run_seed.value_or(config.seed);
      auto p = forager::make_policy(policy, seed);
      std::ofstream log;
      forager::RunOptions opt;
      opt.steps = run_steps;
      opt.seed = seed;
      opt.window = window;
      if (!log_path.empty()) {
        log.open(log_path);
        if (!log) throw forager::IoError("cannot open log '" + log_path + "'");
        opt.log = &log;
      }
      opt.render_every = render_every;
      opt.render_dir = render_dir;
      if (render_every && render_dir.empty()) throw forager::ConfigError("--render-every needs --out");
      const auto metrics = forager::run(config, *p, opt);
      auto j = metrics_json(metrics);
      j["policy"] = policy;
      j["seed"] = seed;
      std::cout << j.dump() << '\n';
      return kOk;
    }
    if (*bench_cmd) {
      if (bench_src.preset.empty() && bench_src.config_path.empty()) bench_src.preset = "forager-extra-large";
      const auto config = load(bench_src, std::nullopt);
      const auto report = forager::bench(config, bench_steps, sample_every, nullptr, rss);
      forager::print_report(std::cout, report);
      return kOk;
    }
    if (*render_cmd) {
      if (render_src.preset.empty() && render_src.config_path.empty()) throw forager::ConfigError("--preset or --config required");
      const auto config = load(render_src, render_seed);
      const forager::World world(config, render_seed.value_or(config.seed));
      forager::write_ppm(forager::render_frame(world, cell_px), render_out);
      return kOk;
    }
  } catch (const forager::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const forager::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIoError;
  }
  return kOk;
}
