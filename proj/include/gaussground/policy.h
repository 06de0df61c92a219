#ifndef GAUSSGROUND_POLICY_H_
#define GAUSSGROUND_POLICY_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussground/distributions.h"
#include "gaussground/geometry.h"
#include "gaussground/rng.h"

namespace gg {

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Screen {
  double width = 1920.0;
  double height = 1080.0;
};

inline constexpr std::size_t kActionDim = 4;
using Action = std::array<double, kActionDim>;

inline constexpr double kMinStd = 1e-4;
inline constexpr double kMaxStd = 10.0;
inline constexpr double kMinBoxSide = 1.0;

struct ActionSample {
  Action action{};
  double logp = 0.0;
  BBox pred_box;
};

// Action (u_cx, u_cy, u_logw, u_logh) to an on-screen canonical box:
//   cx = sigmoid(u_cx) * W, w = 1 + W * exp(u_logw), clipped to the screen,
//   every side at least 1 px.
BBox decode(const Action& action, const Screen& screen);

// Affine Gaussian policy over box actions: mean = W f + b, std = exp(log_std)
// clamped to [kMinStd, kMaxStd].
//
// Parameters live in one flat vector laid out as
//   [weights (4 x feature_dim, row-major) | bias (4) | log_std (4)]
// so optimizers and finite-difference checks can treat them uniformly.
class GaussianBoxPolicy {
 public:
  explicit GaussianBoxPolicy(std::size_t feature_dim, double init_log_std = 0.0);

  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t num_params() const { return params_.size(); }
  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params() { return params_; }

  double weight(std::size_t row, std::size_t col) const {
    return params_[row * feature_dim_ + col];
  }
  double& weight(std::size_t row, std::size_t col) {
    return params_[row * feature_dim_ + col];
  }
  double bias(std::size_t d) const { return params_[bias_offset() + d]; }
  double& bias(std::size_t d) { return params_[bias_offset() + d]; }
  double log_std(std::size_t d) const { return params_[log_std_offset() + d]; }
  double& log_std(std::size_t d) { return params_[log_std_offset() + d]; }

  DiagGaussian forward(std::span<const double> features) const;
  Action mean_action(std::span<const double> features) const;

  ActionSample sample(std::span<const double> features, const Screen& screen,
                      Engine& engine) const;

  double log_prob(std::span<const double> features, const Action& action) const;
  // grad += scale * d log_prob / d params.
  void accumulate_log_prob_grad(std::span<const double> features,
                                const Action& action, double scale,
                                std::span<double> grad) const;

  // KL(this || ref) at the given features.
  double kl_to(const GaussianBoxPolicy& ref,
               std::span<const double> features) const;
  // grad += scale * d KL(this || ref) / d params (ref held fixed).
  void accumulate_kl_grad(const GaussianBoxPolicy& ref,
                          std::span<const double> features, double scale,
                          std::span<double> grad) const;

  // Text checkpoint: one line per named array, "name rows cols : values".
  void save(std::ostream& os) const;
  static GaussianBoxPolicy load(std::istream& is);

  friend bool operator==(const GaussianBoxPolicy&,
                         const GaussianBoxPolicy&) = default;

 private:
  std::size_t bias_offset() const { return kActionDim * feature_dim_; }
  std::size_t log_std_offset() const { return bias_offset() + kActionDim; }
  void check_features(std::span<const double> features) const;
  // Clamped std and whether the clamp is inactive (nonzero derivative).
  double std_of(std::size_t d, bool* active = nullptr) const;

  std::size_t feature_dim_;
  std::vector<double> params_;
};

}  // namespace gg

#endif  // GAUSSGROUND_POLICY_H_
