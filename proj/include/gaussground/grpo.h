#ifndef GAUSSGROUND_GRPO_H_
#define GAUSSGROUND_GRPO_H_

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaussground/distributions.h"
#include "gaussground/geometry.h"
#include "gaussground/policy.h"

namespace gg {

class GroupTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteGradient : public std::runtime_error {
 public:
  NonFiniteGradient(const std::string& what, std::uint64_t task_id)
      : std::runtime_error(what), task_id_(task_id) {}
  std::uint64_t task_id() const { return task_id_; }

 private:
  std::uint64_t task_id_;
};

struct RolloutSample {
  Action action{};
  BBox pred_box;
  double reward = 0.0;
  double logp_old = 0.0;
  double logp_ref = 0.0;
};

// N sampled predictions for one task. `features` is the policy input the
// actions were sampled under.
struct RolloutGroup {
  std::uint64_t task_id = 0;
  std::vector<double> features;
  std::vector<RolloutSample> samples;
  std::vector<double> advantages;
};

enum class OptimizerKind { kGradientAscent, kAdam };

struct GrpoConfig {
  int group_size = 8;
  double clip_epsilon = 0.2;
  double kl_beta = 0.04;
  double learning_rate = 0.003;
  double std_floor = 1e-8;
  // Rescale the step when the gradient norm exceeds this; 0 disables.
  double max_grad_norm = 0.0;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  // Decay the learning rate linearly to 0 over `steps` (training loop only).
  bool linear_decay = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int steps = 2000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct UpdateReport {
  double mean_reward = 0.0;
  double mean_abs_advantage = 0.0;
  double kl_value = 0.0;
  double grad_norm = 0.0;
  double objective_value = 0.0;
};

// Group-standardized advantages with population std. All-equal groups
// (std < 1e-12) map to zeros. Throws GroupTooSmall for fewer than 2 rewards.
std::vector<double> normalize_advantages(std::span<const double> rewards,
                                         double std_floor);
void normalize_group(RolloutGroup& group, double std_floor);

// min(rho * A, clip(rho, 1 - eps, 1 + eps) * A), rho = exp(logp_new - logp_old).
double clipped_surrogate(double logp_new, double logp_old, double advantage,
                         double epsilon);
// d clipped_surrogate / d logp_new.
double clipped_surrogate_dlogp(double logp_new, double logp_old,
                               double advantage, double epsilon);

double kl_penalty(const DiagGaussian& policy, const DiagGaussian& ref);

template <typename P>
concept DifferentiablePolicy =
    requires(const P& cp, P& p, std::span<const double> f, const Action& a,
             double scale, std::span<double> g) {
      { cp.num_params() } -> std::convertible_to<std::size_t>;
      { cp.params() } -> std::convertible_to<std::span<const double>>;
      { p.mutable_params() } -> std::convertible_to<std::span<double>>;
      { cp.log_prob(f, a) } -> std::convertible_to<double>;
      cp.accumulate_log_prob_grad(f, a, scale, g);
      { cp.kl_to(cp, f) } -> std::convertible_to<double>;
      cp.accumulate_kl_grad(cp, f, scale, g);
    };

namespace detail {

inline std::size_t total_samples(std::span<const RolloutGroup> groups) {
  std::size_t m = 0;
  for (const auto& g : groups) m += g.samples.size();
  return m;
}

inline void check_group(const RolloutGroup& g) {
  if (g.advantages.size() != g.samples.size())
    throw std::invalid_argument("rollout group " + std::to_string(g.task_id) +
                                " has no advantages");
}

// Objective terms and gradient contribution of one group, unnormalized
// (sums over the group's samples).
struct GroupTerms {
  double surrogate = 0.0;
  double kl = 0.0;
  double reward = 0.0;
  double abs_adv = 0.0;
};

template <DifferentiablePolicy P>
GroupTerms group_terms(const RolloutGroup& g, const P& policy, const P& ref,
                       const GrpoConfig& cfg, std::span<double> grad) {
  check_group(g);
  GroupTerms t;
  const double kl = policy.kl_to(ref, g.features);
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    const RolloutSample& s = g.samples[i];
    const double adv = g.advantages[i];
    const double lp = policy.log_prob(g.features, s.action);
    t.surrogate += clipped_surrogate(lp, s.logp_old, adv, cfg.clip_epsilon);
    t.kl += kl;
    t.reward += s.reward;
    t.abs_adv += std::abs(adv);
    if (!grad.empty()) {
      const double dlp =
          clipped_surrogate_dlogp(lp, s.logp_old, adv, cfg.clip_epsilon);
      if (dlp != 0.0)
        policy.accumulate_log_prob_grad(g.features, s.action, dlp, grad);
    }
  }
  if (!grad.empty() && cfg.kl_beta != 0.0)
    policy.accumulate_kl_grad(ref, g.features,
                              -cfg.kl_beta * static_cast<double>(g.samples.size()),
                              grad);
  return t;
}

inline UpdateReport make_report(const GroupTerms& sum, std::size_t m,
                                const GrpoConfig& cfg) {
  const double inv = 1.0 / static_cast<double>(m);
  UpdateReport r;
  r.mean_reward = sum.reward * inv;
  r.mean_abs_advantage = sum.abs_adv * inv;
  r.kl_value = sum.kl * inv;
  r.objective_value = (sum.surrogate - cfg.kl_beta * sum.kl) * inv;
  return r;
}

}  // namespace detail

// J = mean over samples of [clipped surrogate - beta * KL(policy || ref)].
template <DifferentiablePolicy P>
double grpo_objective(std::span<const RolloutGroup> groups, const P& policy,
                      const P& ref, const GrpoConfig& cfg) {
  detail::GroupTerms sum;
  for (const auto& g : groups) {
    const auto t = detail::group_terms(g, policy, ref, cfg, {});
    sum.surrogate += t.surrogate;
    sum.kl += t.kl;
  }
  const std::size_t m = detail::total_samples(groups);
  if (m == 0) return 0.0;
  return (sum.surrogate - cfg.kl_beta * sum.kl) / static_cast<double>(m);
}

// Gradient of grpo_objective. Groups are processed in parallel into private
// buffers and summed in group order, so the result does not depend on the
// thread count. Throws NonFiniteGradient naming the first offending task.
template <DifferentiablePolicy P>
UpdateReport grpo_gradient(std::span<const RolloutGroup> groups,
                           const P& policy, const P& ref, const GrpoConfig& cfg,
                           std::vector<double>& grad) {
  const std::size_t n_params = policy.num_params();
  const std::size_t n_groups = groups.size();
  grad.assign(n_params, 0.0);
  const std::size_t m = detail::total_samples(groups);
  if (m == 0) return {};
  for (const auto& g : groups) detail::check_group(g);

  std::vector<double> partial(n_groups * n_params, 0.0);
  std::vector<detail::GroupTerms> terms(n_groups);
  const auto n = static_cast<std::ptrdiff_t>(n_groups);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    terms[idx] = detail::group_terms(
        groups[idx], policy, ref, cfg,
        std::span<double>(partial).subspan(idx * n_params, n_params));
  }

  detail::GroupTerms sum;
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_groups; ++k) {
    const auto block = std::span<const double>(partial).subspan(k * n_params, n_params);
    for (std::size_t j = 0; j < n_params; ++j) {
      if (!std::isfinite(block[j]))
        throw NonFiniteGradient("non-finite gradient component " +
                                    std::to_string(j) + " from task " +
                                    std::to_string(groups[k].task_id),
                                groups[k].task_id);
      grad[j] += block[j];
    }
    sum.surrogate += terms[k].surrogate;
    sum.kl += terms[k].kl;
    sum.reward += terms[k].reward;
    sum.abs_adv += terms[k].abs_adv;
  }
  double sq = 0.0;
  for (double& gj : grad) {
    gj *= inv;
    sq += gj * gj;
  }
  UpdateReport report = detail::make_report(sum, m, cfg);
  report.grad_norm = std::sqrt(sq);
  return report;
}

// Moment estimates for Adam; unused by plain gradient ascent.
struct OptimizerState {
  std::vector<double> m;
  std::vector<double> v;
  long t = 0;
};

// Ascent update params += lr * direction(grad), honoring max_grad_norm.
void apply_update(std::span<double> params, std::span<const double> grad,
                  double grad_norm, const GrpoConfig& cfg,
                  OptimizerState* state, double lr_scale = 1.0);

// One ascent step on grpo_objective (one step per batch). The report
// describes the batch at the pre-update parameters. `state` carries Adam
// moments across steps and may be null for plain gradient ascent.
template <DifferentiablePolicy P>
UpdateReport grpo_step(std::span<const RolloutGroup> groups, P& policy,
                       const P& ref, const GrpoConfig& cfg,
                       OptimizerState* state = nullptr, double lr_scale = 1.0) {
  std::vector<double> grad;
  const UpdateReport report = grpo_gradient(groups, policy, ref, cfg, grad);
  apply_update(policy.mutable_params(), grad, report.grad_norm, cfg, state,
               lr_scale);
  return report;
}

namespace reference {

// Single-threaded gradient accumulated straight into one buffer.
template <DifferentiablePolicy P>
UpdateReport grpo_gradient(std::span<const RolloutGroup> groups,
                           const P& policy, const P& ref, const GrpoConfig& cfg,
                           std::vector<double>& grad) {
  grad.assign(policy.num_params(), 0.0);
  const std::size_t m = detail::total_samples(groups);
  if (m == 0) return {};
  detail::GroupTerms sum;
  for (const auto& g : groups) {
    const auto t = detail::group_terms(g, policy, ref, cfg, grad);
    sum.surrogate += t.surrogate;
    sum.kl += t.kl;
    sum.reward += t.reward;
    sum.abs_adv += t.abs_adv;
  }
  double sq = 0.0;
  for (double& gj : grad) {
    gj /= static_cast<double>(m);
    sq += gj * gj;
  }
  UpdateReport report = detail::make_report(sum, m, cfg);
  report.grad_norm = std::sqrt(sq);
  return report;
}

}  // namespace reference
}  // namespace gg

#endif  // GAUSSGROUND_GRPO_H_
