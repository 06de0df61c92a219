#ifndef GAUSSGROUND_TRAIN_H_
#define GAUSSGROUND_TRAIN_H_

#include <functional>
#include <span>
#include <vector>

#include "gaussground/env.h"
#include "gaussground/grpo.h"
#include "gaussground/policy.h"
#include "gaussground/rewards.h"

namespace gg {

struct TrainConfig {
  GeneratorConfig generator;  // n_tasks is overridden by n_train + n_holdout
  RewardConfig reward;
  GrpoConfig grpo;
  int n_train = 1000;
  int n_holdout = 500;
  int n_probe = 10;
  int tasks_per_step = 8;
  int trace_every = 200;
  int probe_samples = 8;
  // Starting (and KL reference) policy. All zeros is the untrained policy;
  // nonzero gains give a "pretrained" policy that maps the gt geometry
  // features with a systematic bias: u_c = gain * logit(c), u_size =
  // size_gain * log(size) + size_offset.
  double init_log_std = 0.0;
  double init_center_gain = 0.0;
  double init_size_gain = 0.0;
  double init_size_offset = 0.0;

  void validate() const;
};

struct MetricsRow {
  int step = 0;
  double mean_reward = 0.0;
  double reward_std = 0.0;  // mean within-group population std
  double kl = 0.0;
  double grad_norm = 0.0;
  double holdout_accuracy = 0.0;
  double probe_distance = 0.0;
};

struct TrainResult {
  std::vector<MetricsRow> metrics;
  std::vector<TracePoint> trace;
  GaussianBoxPolicy policy{kFeatureDim};
  double baseline_accuracy = 0.0;
  double final_accuracy = 0.0;
};

GaussianBoxPolicy initial_policy(const TrainConfig& cfg);

// Row k describes the policy after k updates: hold-out accuracy and probe
// distance of that policy, plus statistics of the batch it is then updated
// on. The final row's batch is scored but not applied.
TrainResult run_training(const TrainConfig& cfg,
                         const std::function<void(const MetricsRow&)>& on_row = {});

// Centered moving average, "valid" mode: n - window + 1 values (none when
// the series is shorter than the window). Throws for an even or zero window.
std::vector<double> moving_average(std::span<const double> xs, std::size_t window);
double total_variation(std::span<const double> xs);
bool is_non_increasing(std::span<const double> xs);

std::vector<double> trace_distances(const std::vector<TracePoint>& trace);

}  // namespace gg

#endif  // GAUSSGROUND_TRAIN_H_
