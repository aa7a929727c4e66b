#pragma once

#include <cstdint>
#include <vector>

namespace forager {

/// ema_t = decay * ema_{t-1} + (1 - decay) * r_t, starting from 0.
class EmaReward {
 public:
  explicit EmaReward(double decay = 0.999) : decay_(decay) {}
  void update(double reward) { value_ = decay_ * value_ + (1.0 - decay_) * reward; }
  double value() const { return value_; }
  double decay() const { return decay_; }

 private:
  double decay_;
  double value_ = 0.0;
};

struct RunMetrics {
  double ema_reward = 0.0;
  double cumulative_reward = 0.0;
  std::uint64_t steps = 0;
  std::uint64_t window = 0;
  /// Mean reward of each completed window of `window` steps.
  std::vector<double> window_means;
  double wall_seconds = 0.0;
  double steps_per_second = 0.0;

  double mean_reward() const { return steps ? cumulative_reward / static_cast<double>(steps) : 0.0; }
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Online accumulation in constant memory apart from the window means.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(std::uint64_t window = 10'000, double ema_decay = 0.999) : ema_(ema_decay) {
    metrics_.window = window;
  }

  void add(double reward) {
    ema_.update(reward);
    metrics_.cumulative_reward += reward;
    ++metrics_.steps;
    window_sum_ += reward;
    if (metrics_.window && ++window_fill_ == metrics_.window) {
      metrics_.window_means.push_back(window_sum_ / static_cast<double>(metrics_.window));
      window_sum_ = 0.0;
      window_fill_ = 0;
    }
    metrics_.ema_reward = ema_.value();
  }

  RunMetrics finish(double wall_seconds) const {
    RunMetrics m = metrics_;
    m.wall_seconds = wall_seconds;
    m.steps_per_second = wall_seconds > 0.0 ? static_cast<double>(m.steps) / wall_seconds : 0.0;
    return m;
  }

  const RunMetrics& current() const { return metrics_; }

 private:
  EmaReward ema_;
  RunMetrics metrics_;
  double window_sum_ = 0.0;
  std::uint64_t window_fill_ = 0;
};

}  // namespace forager
