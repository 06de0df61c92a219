#ifndef GAUSSGROUND_ROLLOUT_H_
#define GAUSSGROUND_ROLLOUT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gaussground/env.h"
#include "gaussground/grpo.h"
#include "gaussground/policy.h"
#include "gaussground/rewards.h"

namespace gg {

// Samples group_size predictions per task, scores them and fills advantages.
// Every sample draws from its own stream keyed by (seed, step, task, index),
// so the result is identical for any thread count.
std::vector<RolloutGroup> sample_groups(const GaussianBoxPolicy& policy,
                                        const GaussianBoxPolicy& ref,
                                        std::span<const TaskInstance* const> batch,
                                        const RewardConfig& reward,
                                        const GrpoConfig& grpo, int step);

// Scores prediction/ground-truth pairs (parallel map).
std::vector<RewardBreakdown> score_pairs(std::span<const BBox> preds,
                                         std::span<const BBox> gts,
                                         const RewardConfig& cfg);

namespace reference {

std::vector<RolloutGroup> sample_groups(const GaussianBoxPolicy& policy,
                                        const GaussianBoxPolicy& ref,
                                        std::span<const TaskInstance* const> batch,
                                        const RewardConfig& reward,
                                        const GrpoConfig& grpo, int step);

std::vector<RewardBreakdown> score_pairs(std::span<const BBox> preds,
                                         std::span<const BBox> gts,
                                         const RewardConfig& cfg);

}  // namespace reference
}  // namespace gg

#endif  // GAUSSGROUND_ROLLOUT_H_
