#include "gaussground/grpo.h"

#include <algorithm>
#include <numeric>

namespace gg {

void GrpoConfig::validate() const {
  if (group_size < 2) throw std::invalid_argument("group_size must be >= 2");
  if (!(clip_epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (!(kl_beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("learning rate must be > 0");
  if (!(std_floor > 0.0)) throw std::invalid_argument("std floor must be > 0");
  if (!(max_grad_norm >= 0.0))
    throw std::invalid_argument("max grad norm must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 &&
        adam_beta2 < 1.0 && adam_eps > 0.0))
    throw std::invalid_argument("invalid Adam hyperparameters");
  if (steps < 0) throw std::invalid_argument("steps must be >= 0");
}

std::vector<double> normalize_advantages(std::span<const double> rewards,
                                         double std_floor) {
  if (rewards.size() < 2)
    throw GroupTooSmall("advantage normalization needs at least 2 rewards, got " +
                        std::to_string(rewards.size()));
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / n);
  std::vector<double> adv(rewards.size(), 0.0);
  if (sd < 1e-12) return adv;
  const double denom = std::max(sd, std_floor);
  for (std::size_t i = 0; i < rewards.size(); ++i)
    adv[i] = (rewards[i] - mean) / denom;
  return adv;
}

void normalize_group(RolloutGroup& group, double std_floor) {
  std::vector<double> rewards;
  rewards.reserve(group.samples.size());
  for (const auto& s : group.samples) rewards.push_back(s.reward);
  group.advantages = normalize_advantages(rewards, std_floor);
}

double clipped_surrogate(double logp_new, double logp_old, double advantage,
                         double epsilon) {
  const double rho = std::exp(logp_new - logp_old);
  const double clipped = std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon);
  return std::min(rho * advantage, clipped * advantage);
}

double clipped_surrogate_dlogp(double logp_new, double logp_old,
                               double advantage, double epsilon) {
  const double rho = std::exp(logp_new - logp_old);
  const double clipped = std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon);
  // The clipped branch is constant in logp_new unless it equals rho.
  if (rho * advantage <= clipped * advantage || clipped == rho)
    return rho * advantage;
  return 0.0;
}

void apply_update(std::span<double> params, std::span<const double> grad,
                  double grad_norm, const GrpoConfig& cfg,
                  OptimizerState* state, double lr_scale) {
  if (params.size() != grad.size())
    throw std::invalid_argument("apply_update: size mismatch");
  const double lr = cfg.learning_rate * lr_scale;
  double scale = 1.0;
  if (cfg.max_grad_norm > 0.0 && grad_norm > cfg.max_grad_norm)
    scale = cfg.max_grad_norm / grad_norm;

  if (cfg.optimizer == OptimizerKind::kGradientAscent) {
    for (std::size_t j = 0; j < params.size(); ++j)
      params[j] += lr * scale * grad[j];
    return;
  }

  if (state == nullptr)
    throw std::invalid_argument("Adam needs an OptimizerState");
  if (state->m.size() != params.size()) {
    state->m.assign(params.size(), 0.0);
    state->v.assign(params.size(), 0.0);
    state->t = 0;
  }
  ++state->t;
  const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state->t));
  const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state->t));
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double g = scale * grad[j];
    state->m[j] = cfg.adam_beta1 * state->m[j] + (1.0 - cfg.adam_beta1) * g;
    state->v[j] = cfg.adam_beta2 * state->v[j] + (1.0 - cfg.adam_beta2) * g * g;
    const double m_hat = state->m[j] / bc1;
    const double v_hat = state->v[j] / bc2;
    params[j] += lr * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
}

double kl_penalty(const DiagGaussian& policy, const DiagGaussian& ref) {
  return kl_divergence(policy, ref);
}

}  // namespace gg
