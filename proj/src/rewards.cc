#include "gaussground/rewards.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "gaussground/rng.h"

namespace gg {
namespace {

struct VariantEntry {
  RewardVariant variant;
  std::string_view name;
};

constexpr VariantEntry kVariants[] = {
    {RewardVariant::kGaussianCombined, "gaussian"},
    {RewardVariant::kGaussianPoint, "gaussian-point"},
    {RewardVariant::kGaussianCoverage, "gaussian-coverage"},
    {RewardVariant::kSparsePoint, "sparse-point"},
    {RewardVariant::kSparseIoU, "sparse-iou"},
    {RewardVariant::kSparsePointPlusIoU, "sparse-point+iou"},
    {RewardVariant::kInsideGaussian, "inside-gaussian"},
    {RewardVariant::kRandomUniform, "random-uniform"},
    {RewardVariant::kRandomBinary, "random-binary"},
};

// Per-axis pieces of the Gaussian for one box extent.
struct AxisSigma {
  double sigma;
  double dsigma_dextent;  // 0 when the floor or a fixed sigma is active
};

AxisSigma axis_sigma(double extent, const RewardConfig& cfg) {
  if (cfg.fixed_sigma > 0.0) return {std::max(cfg.fixed_sigma, cfg.sigma_floor), 0.0};
  const double s = cfg.alpha * extent;
  if (s > cfg.sigma_floor) return {s, cfg.alpha};
  return {cfg.sigma_floor, 0.0};
}

// log of the 1D Bhattacharyya coefficient between N(mp, vp) and N(mq, vq).
double log_bc_axis(double d, double vp, double vq) {
  const double vbar = 0.5 * (vp + vq);
  return -d * d / (8.0 * vbar) -
         0.5 * (std::log(vbar) - 0.5 * (std::log(vp) + std::log(vq)));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view variant_name(RewardVariant v) {
  for (const auto& e : kVariants)
    if (e.variant == v) return e.name;
  return "unknown";
}

std::optional<RewardVariant> parse_variant(std::string_view name) {
  for (const auto& e : kVariants)
    if (e.name == name) return e.variant;
  return std::nullopt;
}

bool is_dense_gaussian(RewardVariant v) {
  return v == RewardVariant::kGaussianCombined ||
         v == RewardVariant::kGaussianPoint ||
         v == RewardVariant::kGaussianCoverage;
}

void RewardConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("alpha must be > 0");
  if (!(sigma_floor > 0.0) || !std::isfinite(sigma_floor))
    throw std::invalid_argument("sigma_floor must be > 0");
  if (!(nu >= 0.0) || !(gamma >= 0.0))
    throw std::invalid_argument("nu and gamma must be >= 0");
  if (is_dense_gaussian(variant) && !(nu + gamma > 0.0))
    throw std::invalid_argument("nu + gamma must be > 0");
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
    throw std::invalid_argument("iou_threshold must be in (0, 1]");
  if (!(fixed_sigma >= 0.0) || !std::isfinite(fixed_sigma))
    throw std::invalid_argument("fixed_sigma must be >= 0");
}

double RewardRng::uniform01() {
  const std::uint64_t bits = stream_seed(seed_, {index_++});
  // 53 random bits over (2^53 - 1): both 0 and 1 are reachable.
  return static_cast<double>(bits >> 11) / 9007199254740991.0;
}

Gaussian2 element_gaussian(const BBox& b, const RewardConfig& cfg) {
  const AxisSigma sx = axis_sigma(b.width(), cfg);
  const AxisSigma sy = axis_sigma(b.height(), cfg);
  return {center(b), sx.sigma * sx.sigma, sy.sigma * sy.sigma};
}

double point_reward(const BBox& pred, const BBox& gt, const RewardConfig& cfg) {
  const Gaussian2 g = element_gaussian(gt, cfg);
  const Point2 c = center(pred);
  const double dx = c.x - g.mu.x;
  const double dy = c.y - g.mu.y;
  return std::exp(-0.5 * (dx * dx / g.var_x + dy * dy / g.var_y));
}

double bhattacharyya_coefficient(const Gaussian2& p, const Gaussian2& q) {
  return std::exp(log_bc_axis(p.mu.x - q.mu.x, p.var_x, q.var_x) +
                  log_bc_axis(p.mu.y - q.mu.y, p.var_y, q.var_y));
}

double coverage_reward(const BBox& pred, const BBox& gt,
                       const RewardConfig& cfg) {
  return bhattacharyya_coefficient(element_gaussian(pred, cfg),
                                   element_gaussian(gt, cfg));
}

double sparse_point_reward(const BBox& pred, const BBox& gt) {
  return contains(gt, center(pred)) ? 1.0 : 0.0;
}

double sparse_iou_reward(const BBox& pred, const BBox& gt,
                         const RewardConfig& cfg) {
  return iou(pred, gt) > cfg.iou_threshold ? 1.0 : 0.0;
}

double sparse_point_plus_iou_reward(const BBox& pred, const BBox& gt,
                                    const RewardConfig& cfg) {
  return sparse_point_reward(pred, gt) + sparse_iou_reward(pred, gt, cfg);
}

double inside_gaussian_reward(const BBox& pred, const BBox& gt,
                              const RewardConfig& cfg) {
  if (!contains(gt, center(pred))) return 0.0;
  return point_reward(pred, gt, cfg);
}

double format_reward(std::string_view raw_output) {
  std::string_view s = trim(raw_output);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return 0.0;
  s = s.substr(1, s.size() - 2);
  int count = 0;
  while (true) {
    s = trim(s);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || !std::isfinite(value)) return 0.0;
    ++count;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    s = trim(s);
    if (s.empty()) break;
    if (s.front() != ',') return 0.0;
    s.remove_prefix(1);
  }
  return count == 4 ? 1.0 : 0.0;
}

double random_reward(RandomKind kind, RewardRng& rng) {
  const double u = rng.uniform01();
  if (kind == RandomKind::kUniform01) return u;
  return u < 0.5 ? 0.0 : 1.0;
}

RewardBreakdown total_reward(const BBox& pred, const BBox& gt,
                             const RewardConfig& cfg) {
  if (!is_dense_gaussian(cfg.variant))
    throw std::invalid_argument("total_reward: variant is not a dense Gaussian");
  RewardBreakdown out;
  out.variant = cfg.variant;
  out.point = point_reward(pred, gt, cfg);
  out.coverage = coverage_reward(pred, gt, cfg);
  const double nu = cfg.variant == RewardVariant::kGaussianCoverage ? 0.0 : cfg.nu;
  const double gamma = cfg.variant == RewardVariant::kGaussianPoint ? 0.0 : cfg.gamma;
  out.total = nu * out.point + gamma * out.coverage;
  return out;
}

RewardBreakdown compute_reward(const BBox& pred, const BBox& gt,
                               const RewardConfig& cfg, RewardRng* rng,
                               double format) {
  RewardBreakdown out;
  if (is_dense_gaussian(cfg.variant)) {
    out = total_reward(pred, gt, cfg);
  } else {
    out.variant = cfg.variant;
    switch (cfg.variant) {
      case RewardVariant::kSparsePoint:
        out.total = sparse_point_reward(pred, gt);
        break;
      case RewardVariant::kSparseIoU:
        out.total = sparse_iou_reward(pred, gt, cfg);
        break;
      case RewardVariant::kSparsePointPlusIoU:
        out.total = sparse_point_plus_iou_reward(pred, gt, cfg);
        break;
      case RewardVariant::kInsideGaussian:
        out.total = inside_gaussian_reward(pred, gt, cfg);
        out.point = out.total;
        break;
      case RewardVariant::kRandomUniform:
      case RewardVariant::kRandomBinary:
        if (rng == nullptr)
          throw std::invalid_argument("random reward variant needs a RewardRng");
        out.total = random_reward(cfg.variant == RewardVariant::kRandomUniform
                                      ? RandomKind::kUniform01
                                      : RandomKind::kBinary,
                                  *rng);
        break;
      default:
        break;
    }
  }
  if (cfg.format_bonus_enabled) {
    out.format = format;
    out.total += format;
  }
  return out;
}

std::array<double, 4> reward_gradient(const BBox& pred, const BBox& gt,
                                      const RewardConfig& cfg) {
  if (!is_dense_gaussian(cfg.variant))
    throw std::invalid_argument("reward_gradient: variant is not a dense Gaussian");
  const double nu = cfg.variant == RewardVariant::kGaussianCoverage ? 0.0 : cfg.nu;
  const double gamma = cfg.variant == RewardVariant::kGaussianPoint ? 0.0 : cfg.gamma;

  const Point2 cp = center(pred);
  const Point2 cg = center(gt);
  const double dx = cp.x - cg.x;
  const double dy = cp.y - cg.y;

  // Derivatives w.r.t. predicted center and predicted extent, per axis.
  double d_cx = 0.0, d_cy = 0.0, d_w = 0.0, d_h = 0.0;

  if (nu != 0.0) {
    const Gaussian2 g = element_gaussian(gt, cfg);
    const double p = std::exp(-0.5 * (dx * dx / g.var_x + dy * dy / g.var_y));
    d_cx += nu * -p * dx / g.var_x;
    d_cy += nu * -p * dy / g.var_y;
  }

  if (gamma != 0.0) {
    const AxisSigma px = axis_sigma(pred.width(), cfg);
    const AxisSigma py = axis_sigma(pred.height(), cfg);
    const Gaussian2 g = element_gaussian(gt, cfg);
    const double vpx = px.sigma * px.sigma;
    const double vpy = py.sigma * py.sigma;
    const double bc =
        std::exp(log_bc_axis(dx, vpx, g.var_x) + log_bc_axis(dy, vpy, g.var_y));

    const auto axis = [&](double d, double vp, double vq, const AxisSigma& sp,
                          double& d_center, double& d_extent) {
      const double vbar = 0.5 * (vp + vq);
      const double dlog_dd = -d / (4.0 * vbar);
      const double dlog_dvp =
          d * d / (16.0 * vbar * vbar) - 0.25 / vbar + 0.25 / vp;
      d_center += gamma * bc * dlog_dd;
      d_extent += gamma * bc * dlog_dvp * 2.0 * sp.sigma * sp.dsigma_dextent;
    };
    axis(dx, vpx, g.var_x, px, d_cx, d_w);
    axis(dy, vpy, g.var_y, py, d_cy, d_h);
  }

  // center = (x1 + x2) / 2, extent = x2 - x1.
  return {0.5 * d_cx - d_w, 0.5 * d_cy - d_h, 0.5 * d_cx + d_w,
          0.5 * d_cy + d_h};
}

}  // namespace gg
