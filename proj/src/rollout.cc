#include "gaussground/rollout.h"

#include <stdexcept>

#include "gaussground/rng.h"

namespace gg {
namespace {

RolloutGroup rollout_task(const GaussianBoxPolicy& policy,
                          const GaussianBoxPolicy& ref, const TaskInstance& task,
                          const RewardConfig& reward, const GrpoConfig& grpo,
                          int step) {
  RolloutGroup g;
  g.task_id = task.task_id;
  g.features = task.features;
  g.samples.resize(static_cast<std::size_t>(grpo.group_size));
  const auto step_key = static_cast<std::uint64_t>(step);
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    Engine eng = make_engine(grpo.seed, {0x5a3e, step_key, task.task_id, i});
    const ActionSample a = policy.sample(task.features, task.screen(), eng);
    RewardRng rng(stream_seed(reward.rng_seed, {grpo.seed, step_key, task.task_id, i}));
    RolloutSample& s = g.samples[i];
    s.action = a.action;
    s.pred_box = a.pred_box;
    s.logp_old = a.logp;
    s.logp_ref = ref.log_prob(task.features, a.action);
    s.reward = compute_reward(a.pred_box, task.gt_box, reward, &rng).total;
  }
  normalize_group(g, grpo.std_floor);
  return g;
}

void check_pairs(std::span<const BBox> preds, std::span<const BBox> gts) {
  if (preds.size() != gts.size())
    throw std::invalid_argument("score_pairs: size mismatch");
}

}  // namespace

std::vector<RolloutGroup> sample_groups(const GaussianBoxPolicy& policy,
                                        const GaussianBoxPolicy& ref,
                                        std::span<const TaskInstance* const> batch,
                                        const RewardConfig& reward,
                                        const GrpoConfig& grpo, int step) {
  std::vector<RolloutGroup> groups(batch.size());
  const auto n = static_cast<std::ptrdiff_t>(batch.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    groups[idx] = rollout_task(policy, ref, *batch[idx], reward, grpo, step);
  }
  return groups;
}

std::vector<RewardBreakdown> score_pairs(std::span<const BBox> preds,
                                         std::span<const BBox> gts,
                                         const RewardConfig& cfg) {
  check_pairs(preds, gts);
  std::vector<RewardBreakdown> out(preds.size());
  const auto n = static_cast<std::ptrdiff_t>(preds.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    RewardRng rng(cfg.rng_seed, i);
    out[i] = compute_reward(preds[i], gts[i], cfg, &rng);
  }
  return out;
}

namespace reference {

std::vector<RolloutGroup> sample_groups(const GaussianBoxPolicy& policy,
                                        const GaussianBoxPolicy& ref,
                                        std::span<const TaskInstance* const> batch,
                                        const RewardConfig& reward,
                                        const GrpoConfig& grpo, int step) {
  std::vector<RolloutGroup> groups;
  groups.reserve(batch.size());
  for (const TaskInstance* t : batch)
    groups.push_back(rollout_task(policy, ref, *t, reward, grpo, step));
  return groups;
}

std::vector<RewardBreakdown> score_pairs(std::span<const BBox> preds,
                                         std::span<const BBox> gts,
                                         const RewardConfig& cfg) {
  check_pairs(preds, gts);
  std::vector<RewardBreakdown> out;
  out.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    RewardRng rng(cfg.rng_seed, i);
    out.push_back(compute_reward(preds[i], gts[i], cfg, &rng));
  }
  return out;
}

}  // namespace reference
}  // namespace gg
