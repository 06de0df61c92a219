#include "gaussground/distributions.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gg {

double log_density(const DiagGaussian& d, std::span<const double> x) {
  if (x.size() != d.mean.size() || d.std.size() != d.mean.size())
    throw std::invalid_argument("log_density: dimension mismatch");
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  double lp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = (x[i] - d.mean[i]) / d.std[i];
    lp += -0.5 * z * z - std::log(d.std[i]) - half_log_2pi;
  }
  return lp;
}

double kl_divergence(const DiagGaussian& p, const DiagGaussian& q) {
  if (p.mean.size() != q.mean.size() || p.std.size() != p.mean.size() ||
      q.std.size() != q.mean.size())
    throw std::invalid_argument("kl_divergence: dimension mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.mean.size(); ++i) {
    const double dm = p.mean[i] - q.mean[i];
    const double vp = p.std[i] * p.std[i];
    const double vq = q.std[i] * q.std[i];
    kl += std::log(q.std[i] / p.std[i]) + (vp + dm * dm) / (2.0 * vq) - 0.5;
  }
  return kl;
}

}  // namespace gg
