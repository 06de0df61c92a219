#include "gaussground/geometry.h"

#include <algorithm>

namespace gg {

BBox::BBox(double x1, double y1, double x2, double y2) {
  if (!std::isfinite(x1) || !std::isfinite(y1) || !std::isfinite(x2) ||
      !std::isfinite(y2)) {
    throw std::invalid_argument("BBox: non-finite coordinate");
  }
  x1_ = std::min(x1, x2);
  x2_ = std::max(x1, x2);
  y1_ = std::min(y1, y2);
  y2_ = std::max(y1, y2);
}

Point2 center(const BBox& b) {
  return {(b.x1() + b.x2()) / 2.0, (b.y1() + b.y2()) / 2.0};
}

bool contains(const BBox& b, const Point2& p) {
  return b.x1() <= p.x && p.x <= b.x2() && b.y1() <= p.y && p.y <= b.y2();
}

double iou(const BBox& a, const BBox& b) {
  const double iw =
      std::max(0.0, std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1()));
  const double ih =
      std::max(0.0, std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1()));
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

Gaussian2 gaussian_from_bbox(const BBox& b, double alpha, double sigma_floor) {
  const double sx = std::max(alpha * b.width(), sigma_floor);
  const double sy = std::max(alpha * b.height(), sigma_floor);
  return {center(b), sx * sx, sy * sy};
}

double center_distance(const BBox& a, const BBox& b) {
  const Point2 ca = center(a);
  const Point2 cb = center(b);
  return std::hypot(ca.x - cb.x, ca.y - cb.y);
}

}  // namespace gg
