#ifndef GAUSSGROUND_DISTRIBUTIONS_H_
#define GAUSSGROUND_DISTRIBUTIONS_H_

#include <span>
#include <vector>

namespace gg {

// Diagonal Gaussian over a real vector space.
struct DiagGaussian {
  std::vector<double> mean;
  std::vector<double> std;
};

double log_density(const DiagGaussian& d, std::span<const double> x);

// Exact KL(p || q), summed over dimensions. Throws std::invalid_argument on
// dimension mismatch.
double kl_divergence(const DiagGaussian& p, const DiagGaussian& q);

}  // namespace gg

#endif  // GAUSSGROUND_DISTRIBUTIONS_H_
