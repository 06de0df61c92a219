#ifndef GAUSSGROUND_GEOMETRY_H_
#define GAUSSGROUND_GEOMETRY_H_

#include <cmath>
#include <stdexcept>

namespace gg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Axis-aligned box in pixel coordinates. Always canonical: x1 <= x2, y1 <= y2.
class BBox {
 public:
  BBox() = default;
  // Reorders flipped coordinates; throws std::invalid_argument on non-finite input.
  BBox(double x1, double y1, double x2, double y2);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }
  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double area() const { return width() * height(); }

  BBox translated(double dx, double dy) const {
    return {x1_ + dx, y1_ + dy, x2_ + dx, y2_ + dy};
  }
  BBox scaled(double k) const { return {x1_ * k, y1_ * k, x2_ * k, y2_ * k}; }

  friend bool operator==(const BBox&, const BBox&) = default;

 private:
  double x1_ = 0.0, y1_ = 0.0, x2_ = 0.0, y2_ = 0.0;
};

// Diagonal-covariance 2D Gaussian.
struct Gaussian2 {
  Point2 mu;
  double var_x = 1.0;
  double var_y = 1.0;
};

inline constexpr double kDefaultSigmaFloor = 1e-3;

Point2 center(const BBox& b);

// Closed intervals: a point on the edge is inside.
bool contains(const BBox& b, const Point2& p);

// Intersection over union; 0 when the union has zero area.
double iou(const BBox& a, const BBox& b);

// Adaptive variance: sigma = max(alpha * extent, sigma_floor) per axis.
Gaussian2 gaussian_from_bbox(const BBox& b, double alpha,
                             double sigma_floor = kDefaultSigmaFloor);

double center_distance(const BBox& a, const BBox& b);

}  // namespace gg

#endif  // GAUSSGROUND_GEOMETRY_H_
