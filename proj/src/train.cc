#include "gaussground/train.h"

#include <cmath>
#include <stdexcept>

#include "gaussground/rng.h"
#include "gaussground/rollout.h"

namespace gg {
namespace {

double within_group_std(const std::vector<RolloutGroup>& groups) {
  if (groups.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (const auto& s : g.samples) mean += s.reward;
    mean /= static_cast<double>(g.samples.size());
    double ss = 0.0;
    for (const auto& s : g.samples) ss += (s.reward - mean) * (s.reward - mean);
    total += std::sqrt(ss / static_cast<double>(g.samples.size()));
  }
  return total / static_cast<double>(groups.size());
}

}  // namespace

GaussianBoxPolicy initial_policy(const TrainConfig& cfg) {
  GaussianBoxPolicy p(kFeatureDim, cfg.init_log_std);
  p.weight(0, 0) = cfg.init_center_gain;
  p.weight(1, 1) = cfg.init_center_gain;
  p.weight(2, 2) = cfg.init_size_gain;
  p.weight(3, 3) = cfg.init_size_gain;
  p.bias(2) = cfg.init_size_offset;
  p.bias(3) = cfg.init_size_offset;
  return p;
}

void TrainConfig::validate() const {
  reward.validate();
  grpo.validate();
  if (n_train < 1) throw InvalidConfig("n_train must be >= 1");
  if (n_holdout < 1) throw InvalidConfig("n_holdout must be >= 1");
  if (n_probe < 1 || n_probe > n_holdout)
    throw InvalidConfig("n_probe must be in [1, n_holdout]");
  if (tasks_per_step < 1) throw InvalidConfig("tasks_per_step must be >= 1");
  if (trace_every < 1) throw InvalidConfig("trace_every must be >= 1");
  if (probe_samples < 1) throw InvalidConfig("probe_samples must be >= 1");
}

TrainResult run_training(const TrainConfig& cfg,
                         const std::function<void(const MetricsRow&)>& on_row) {
  cfg.validate();
  GeneratorConfig gen = cfg.generator;
  gen.n_tasks = cfg.n_train + cfg.n_holdout;
  std::vector<TaskInstance> all = generate(gen);
  const std::vector<TaskInstance> train(all.begin(), all.begin() + cfg.n_train);
  const std::vector<TaskInstance> holdout(all.begin() + cfg.n_train, all.end());

  const GaussianBoxPolicy ref = initial_policy(cfg);
  TrainResult result;
  result.policy = ref;
  GaussianBoxPolicy& policy = result.policy;

  const std::uint64_t probe_seed = stream_seed(cfg.grpo.seed, {0x960be});
  DistanceTrace trace(
      select_probe_tasks(ref, holdout, static_cast<std::size_t>(cfg.n_probe),
                         cfg.probe_samples, probe_seed),
      cfg.trace_every, cfg.probe_samples, probe_seed);

  OptimizerState opt_state;
  std::vector<const TaskInstance*> batch(static_cast<std::size_t>(cfg.tasks_per_step));
  for (int step = 0; step <= cfg.grpo.steps; ++step) {
    MetricsRow row;
    row.step = step;
    row.holdout_accuracy = greedy_accuracy(policy, holdout);
    row.probe_distance = trace.measure(policy);
    trace.maybe_record(step, policy);

    Engine eng = make_engine(cfg.grpo.seed, {0xba7c, static_cast<std::uint64_t>(step)});
    std::uniform_int_distribution<std::size_t> pick(0, train.size() - 1);
    for (auto& t : batch) t = &train[pick(eng)];
    const std::vector<RolloutGroup> groups =
        sample_groups(policy, ref, batch, cfg.reward, cfg.grpo, step);

    UpdateReport report;
    if (step < cfg.grpo.steps) {
      report = grpo_step<GaussianBoxPolicy>(
          groups, policy, ref, cfg.grpo, &opt_state,
          cfg.grpo.linear_decay
              ? 1.0 - static_cast<double>(step) / cfg.grpo.steps
              : 1.0);
    } else {
      std::vector<double> grad;
      report = grpo_gradient<GaussianBoxPolicy>(groups, policy, ref, cfg.grpo, grad);
    }
    row.mean_reward = report.mean_reward;
    row.reward_std = within_group_std(groups);
    row.kl = report.kl_value;
    row.grad_norm = report.grad_norm;

    if (step == 0) result.baseline_accuracy = row.holdout_accuracy;
    result.final_accuracy = row.holdout_accuracy;
    result.metrics.push_back(row);
    if (on_row) on_row(row);
  }
  result.trace = trace.points();
  return result;
}

std::vector<double> moving_average(std::span<const double> xs,
                                   std::size_t window) {
  if (window == 0 || window % 2 == 0)
    throw std::invalid_argument("moving_average: window must be odd");
  std::vector<double> out;
  if (xs.size() < window) return out;
  for (std::size_t i = 0; i + window <= xs.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < window; ++k) s += xs[i + k];
    out.push_back(s / static_cast<double>(window));
  }
  return out;
}

double total_variation(std::span<const double> xs) {
  double tv = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) tv += std::abs(xs[i] - xs[i - 1]);
  return tv;
}

bool is_non_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] > xs[i - 1]) return false;
  return true;
}

std::vector<double> trace_distances(const std::vector<TracePoint>& trace) {
  std::vector<double> d;
  d.reserve(trace.size());
  for (const auto& p : trace) d.push_back(p.mean_distance);
  return d;
}

}  // namespace gg
