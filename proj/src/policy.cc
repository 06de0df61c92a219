#include "gaussground/policy.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

namespace gg {
namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Clip [lo, hi] to [0, extent] and widen to kMinBoxSide if needed.
void clip_interval(double& lo, double& hi, double extent) {
  lo = std::clamp(lo, 0.0, extent);
  hi = std::clamp(hi, 0.0, extent);
  if (hi - lo < kMinBoxSide) {
    if (lo + kMinBoxSide <= extent) {
      hi = lo + kMinBoxSide;
    } else {
      hi = extent;
      lo = extent - kMinBoxSide;
    }
  }
}

void write_array(std::ostream& os, const char* name, std::size_t rows,
                 std::size_t cols, std::span<const double> values) {
  os << name << ' ' << rows << ' ' << cols << " :";
  for (double v : values) os << ' ' << v;
  os << '\n';
}

std::vector<double> read_array(std::istream& is, const std::string& expected,
                               std::size_t* rows, std::size_t* cols) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("checkpoint: missing array '" + expected + "'");
  std::istringstream ls(line);
  std::string name, colon;
  ls >> name >> *rows >> *cols >> colon;
  if (!ls || name != expected || colon != ":")
    throw std::runtime_error("checkpoint: bad header for '" + expected + "'");
  std::vector<double> values(*rows * *cols);
  for (double& v : values) {
    std::string tok;
    if (!(ls >> tok))
      throw std::runtime_error("checkpoint: short array '" + expected + "'");
    v = std::stod(tok);
  }
  std::string extra;
  if (ls >> extra)
    throw std::runtime_error("checkpoint: long array '" + expected + "'");
  return values;
}

}  // namespace

BBox decode(const Action& action, const Screen& screen) {
  const double cx = sigmoid(action[0]) * screen.width;
  const double cy = sigmoid(action[1]) * screen.height;
  const double w = kMinBoxSide + screen.width * std::exp(action[2]);
  const double h = kMinBoxSide + screen.height * std::exp(action[3]);
  double x1 = cx - 0.5 * w, x2 = cx + 0.5 * w;
  double y1 = cy - 0.5 * h, y2 = cy + 0.5 * h;
  clip_interval(x1, x2, screen.width);
  clip_interval(y1, y2, screen.height);
  return {x1, y1, x2, y2};
}

GaussianBoxPolicy::GaussianBoxPolicy(std::size_t feature_dim,
                                     double init_log_std)
    : feature_dim_(feature_dim),
      params_(kActionDim * feature_dim + 2 * kActionDim, 0.0) {
  for (std::size_t d = 0; d < kActionDim; ++d) log_std(d) = init_log_std;
}

void GaussianBoxPolicy::check_features(std::span<const double> features) const {
  if (features.size() != feature_dim_)
    throw DimensionMismatch("policy expects " + std::to_string(feature_dim_) +
                            " features, got " +
                            std::to_string(features.size()));
}

double GaussianBoxPolicy::std_of(std::size_t d, bool* active) const {
  const double s = std::exp(log_std(d));
  if (active != nullptr) *active = s > kMinStd && s < kMaxStd;
  return std::clamp(s, kMinStd, kMaxStd);
}

Action GaussianBoxPolicy::mean_action(std::span<const double> features) const {
  check_features(features);
  Action mean{};
  for (std::size_t d = 0; d < kActionDim; ++d) {
    double m = bias(d);
    for (std::size_t j = 0; j < feature_dim_; ++j)
      m += weight(d, j) * features[j];
    mean[d] = m;
  }
  return mean;
}

DiagGaussian GaussianBoxPolicy::forward(std::span<const double> features) const {
  const Action mean = mean_action(features);
  DiagGaussian out;
  out.mean.assign(mean.begin(), mean.end());
  out.std.resize(kActionDim);
  for (std::size_t d = 0; d < kActionDim; ++d) out.std[d] = std_of(d);
  return out;
}

ActionSample GaussianBoxPolicy::sample(std::span<const double> features,
                                       const Screen& screen,
                                       Engine& engine) const {
  const Action mean = mean_action(features);
  std::normal_distribution<double> normal(0.0, 1.0);
  ActionSample s;
  for (std::size_t d = 0; d < kActionDim; ++d)
    s.action[d] = mean[d] + std_of(d) * normal(engine);
  s.logp = log_prob(features, s.action);
  s.pred_box = decode(s.action, screen);
  return s;
}

double GaussianBoxPolicy::log_prob(std::span<const double> features,
                                   const Action& action) const {
  return log_density(forward(features), action);
}

void GaussianBoxPolicy::accumulate_log_prob_grad(
    std::span<const double> features, const Action& action, double scale,
    std::span<double> grad) const {
  if (grad.size() != params_.size())
    throw DimensionMismatch("gradient buffer size mismatch");
  const Action mean = mean_action(features);
  for (std::size_t d = 0; d < kActionDim; ++d) {
    bool active = false;
    const double s = std_of(d, &active);
    const double diff = action[d] - mean[d];
    const double dmean = scale * diff / (s * s);
    for (std::size_t j = 0; j < feature_dim_; ++j)
      grad[d * feature_dim_ + j] += dmean * features[j];
    grad[bias_offset() + d] += dmean;
    if (active)
      grad[log_std_offset() + d] += scale * (diff * diff / (s * s) - 1.0);
  }
}

double GaussianBoxPolicy::kl_to(const GaussianBoxPolicy& ref,
                                std::span<const double> features) const {
  return kl_divergence(forward(features), ref.forward(features));
}

void GaussianBoxPolicy::accumulate_kl_grad(const GaussianBoxPolicy& ref,
                                           std::span<const double> features,
                                           double scale,
                                           std::span<double> grad) const {
  if (grad.size() != params_.size() || ref.feature_dim_ != feature_dim_)
    throw DimensionMismatch("kl gradient dimension mismatch");
  const Action mean = mean_action(features);
  const Action ref_mean = ref.mean_action(features);
  for (std::size_t d = 0; d < kActionDim; ++d) {
    bool active = false;
    const double s = std_of(d, &active);
    const double rs = ref.std_of(d);
    const double dmean = scale * (mean[d] - ref_mean[d]) / (rs * rs);
    for (std::size_t j = 0; j < feature_dim_; ++j)
      grad[d * feature_dim_ + j] += dmean * features[j];
    grad[bias_offset() + d] += dmean;
    if (active) grad[log_std_offset() + d] += scale * (s * s / (rs * rs) - 1.0);
  }
}

void GaussianBoxPolicy::save(std::ostream& os) const {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  const std::span<const double> p = params_;
  os << "gaussground-policy 1\n";
  write_array(os, "weights", kActionDim, feature_dim_,
              p.subspan(0, bias_offset()));
  write_array(os, "bias", 1, kActionDim, p.subspan(bias_offset(), kActionDim));
  write_array(os, "log_std", 1, kActionDim,
              p.subspan(log_std_offset(), kActionDim));
  os.precision(old_precision);
}

GaussianBoxPolicy GaussianBoxPolicy::load(std::istream& is) {
  std::string magic;
  int version = 0;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("checkpoint: empty input");
  std::istringstream(line) >> magic >> version;
  if (magic != "gaussground-policy" || version != 1)
    throw std::runtime_error("checkpoint: unrecognized header");
  std::size_t rows = 0, cols = 0;
  const std::vector<double> w = read_array(is, "weights", &rows, &cols);
  if (rows != kActionDim)
    throw std::runtime_error("checkpoint: weights must have 4 rows");
  GaussianBoxPolicy policy(cols);
  std::copy(w.begin(), w.end(), policy.params_.begin());
  const std::vector<double> b = read_array(is, "bias", &rows, &cols);
  const std::vector<double> ls = read_array(is, "log_std", &rows, &cols);
  if (b.size() != kActionDim || ls.size() != kActionDim)
    throw std::runtime_error("checkpoint: bias/log_std must have 4 values");
  std::copy(b.begin(), b.end(), policy.params_.begin() + policy.bias_offset());
  std::copy(ls.begin(), ls.end(),
            policy.params_.begin() + policy.log_std_offset());
  return policy;
}

}  // namespace gg
