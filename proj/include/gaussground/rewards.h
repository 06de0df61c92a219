#ifndef GAUSSGROUND_REWARDS_H_
#define GAUSSGROUND_REWARDS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gaussground/geometry.h"

namespace gg {

enum class RewardVariant {
  kGaussianCombined,
  kGaussianPoint,
  kGaussianCoverage,
  kSparsePoint,
  kSparseIoU,
  kSparsePointPlusIoU,
  kInsideGaussian,
  kRandomUniform,
  kRandomBinary,
};

// CLI spelling, e.g. "gaussian", "sparse-point+iou", "random-binary".
std::string_view variant_name(RewardVariant v);
std::optional<RewardVariant> parse_variant(std::string_view name);
bool is_dense_gaussian(RewardVariant v);

struct RewardConfig {
  RewardVariant variant = RewardVariant::kGaussianCombined;
  double alpha = 0.5;
  double nu = 1.0;
  double gamma = 1.0;
  double sigma_floor = kDefaultSigmaFloor;
  double iou_threshold = 0.5;
  // When > 0, every element gets this sigma (px) instead of alpha * extent.
  double fixed_sigma = 0.0;
  bool format_bonus_enabled = false;
  std::uint64_t rng_seed = 0;

  // Throws std::invalid_argument on out-of-range hyperparameters.
  void validate() const;
};

struct RewardBreakdown {
  double total = 0.0;
  double point = 0.0;
  double coverage = 0.0;
  double format = 0.0;
  RewardVariant variant = RewardVariant::kGaussianCombined;
};

// Counter-based generator for the spurious-reward controls: the value of a
// draw depends only on (seed, index).
class RewardRng {
 public:
  explicit RewardRng(std::uint64_t seed, std::uint64_t index = 0)
      : seed_(seed), index_(index) {}
  double uniform01();
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
};

enum class RandomKind { kUniform01, kBinary };

// Box-derived Gaussian honoring cfg.fixed_sigma.
Gaussian2 element_gaussian(const BBox& b, const RewardConfig& cfg);

double point_reward(const BBox& pred, const BBox& gt, const RewardConfig& cfg);
double coverage_reward(const BBox& pred, const BBox& gt,
                       const RewardConfig& cfg);
// Bhattacharyya coefficient of two diagonal Gaussians, computed in log space.
double bhattacharyya_coefficient(const Gaussian2& p, const Gaussian2& q);

double sparse_point_reward(const BBox& pred, const BBox& gt);
double sparse_iou_reward(const BBox& pred, const BBox& gt,
                         const RewardConfig& cfg);
double sparse_point_plus_iou_reward(const BBox& pred, const BBox& gt,
                                    const RewardConfig& cfg);
double inside_gaussian_reward(const BBox& pred, const BBox& gt,
                              const RewardConfig& cfg);
double format_reward(std::string_view raw_output);
double random_reward(RandomKind kind, RewardRng& rng);

// Dense variants only (combined, point, coverage); the other variants are
// routed through compute_reward.
RewardBreakdown total_reward(const BBox& pred, const BBox& gt,
                             const RewardConfig& cfg);

// Any variant. `rng` is required for the random variants. `format` is the
// format-reward value for this prediction (1 when no raw text exists).
RewardBreakdown compute_reward(const BBox& pred, const BBox& gt,
                               const RewardConfig& cfg,
                               RewardRng* rng = nullptr, double format = 1.0);

// d total / d (x1, y1, x2, y2) of the predicted box, dense variants only.
// Sigma clamped at the floor contributes zero derivative.
std::array<double, 4> reward_gradient(const BBox& pred, const BBox& gt,
                                      const RewardConfig& cfg);

}  // namespace gg

#endif  // GAUSSGROUND_REWARDS_H_
