#include "mono3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mono3d {

double wrap_to_pi(double angle) {
  double wrapped = std::fmod(angle, 2.0 * kPi);
  if (wrapped > kPi) wrapped -= 2.0 * kPi;
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

ObservationAngle ObservationAngle::from_beta(double beta) {
  ObservationAngle angle;
  angle.beta = beta;
  angle.heading = beta >= 0.0 ? 1 : 0;
  angle.theta = std::abs(beta);
  return angle;
}

ObservationAngle fold_observation_angle(double angle) {
  double wrapped = wrap_to_pi(angle);
  if (wrapped > kPi / 2.0) {
    wrapped -= kPi;
  } else if (wrapped <= -kPi / 2.0) {
    wrapped += kPi;
  }
  return ObservationAngle::from_beta(wrapped);
}

ObservationAngle beta_from_rotation_y(double rotation_y, const Vec3& center) {
  return fold_observation_angle(rotation_y - std::atan2(center.x, center.z));
}

double yaw_from_observation(const ObservationAngle& angle, const Vec3& center) {
  return wrap_to_pi(angle.beta + std::atan2(center.x, center.z));
}

PixelPoint project(const Vec3& point, const CameraCalib& calib) {
  if (point.z <= 0.0) throw std::domain_error("projection needs z > 0");
  return PixelPoint{calib.fu * point.x / point.z + calib.cu,
                    calib.fv * point.y / point.z + calib.cv};
}

Vec3 back_project(const PixelPoint& pixel, double z, const CameraCalib& calib) {
  if (z <= 0.0) throw std::domain_error("back-projection needs z > 0");
  return Vec3{(pixel.u - calib.cu) * z / calib.fu, (pixel.v - calib.cv) * z / calib.fv, z};
}

BevPolygon bev_rect(double cx, double cz, double width, double length, double yaw) {
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  const double hw = 0.5 * width;
  const double hl = 0.5 * length;
  // CCW in (x, z) for yaw 0: right-near, right-far, left-far, left-near.
  const BevPoint local[4] = {{hw, -hl}, {hw, hl}, {-hw, hl}, {-hw, -hl}};
  BevPolygon poly;
  for (int i = 0; i < 4; ++i) {
    poly.v[static_cast<std::size_t>(i)] =
        BevPoint{cx + c * local[i].x + s * local[i].z, cz - s * local[i].x + c * local[i].z};
  }
  return poly;
}

BevPolygon box_corners_bev(const Vec3& center, const Size3D& size,
                           const ObservationAngle& angle) {
  if (size.w <= 0.0 || size.l <= 0.0) {
    throw std::domain_error("box footprint needs positive width and length");
  }
  const double yaw = yaw_from_observation(angle, center);
  return bev_rect(center.x, center.z, size.w, size.l, yaw);
}

BevPolygon bev_footprint(const GroundTruthObject& object) {
  return bev_rect(object.center.x, object.center.z, object.size.w, object.size.l,
                  object.rotation_y);
}

double polygon_area(const BevPolygon& poly) {
  double twice_area = 0.0;
  for (std::size_t i = 0; i < poly.v.size(); ++i) {
    const BevPoint& a = poly.v[i];
    const BevPoint& b = poly.v[(i + 1) % poly.v.size()];
    twice_area += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice_area;
}

namespace {

double signed_area_of(const std::vector<BevPoint>& points) {
  double twice_area = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const BevPoint& a = points[i];
    const BevPoint& b = points[(i + 1) % points.size()];
    twice_area += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice_area;
}

// > 0 when p lies left of the directed edge a->b (inside for CCW polygons).
double edge_side(const BevPoint& a, const BevPoint& b, const BevPoint& p) {
  return (b.x - a.x) * (p.z - a.z) - (b.z - a.z) * (p.x - a.x);
}

BevPoint segment_intersection(const BevPoint& p0, const BevPoint& p1, const BevPoint& a,
                              const BevPoint& b) {
  const double d0 = edge_side(a, b, p0);
  const double d1 = edge_side(a, b, p1);
  const double t = d0 / (d0 - d1);
  return BevPoint{p0.x + t * (p1.x - p0.x), p0.z + t * (p1.z - p0.z)};
}

}  // namespace

double convex_intersection_area(const BevPolygon& a, const BevPolygon& b) {
  // Clip polygon a successively against each edge of b.
  std::vector<BevPoint> subject(a.v.begin(), a.v.end());
  for (std::size_t i = 0; i < b.v.size() && !subject.empty(); ++i) {
    const BevPoint& ca = b.v[i];
    const BevPoint& cb = b.v[(i + 1) % b.v.size()];
    std::vector<BevPoint> clipped;
    clipped.reserve(subject.size() + 1);
    for (std::size_t j = 0; j < subject.size(); ++j) {
      const BevPoint& current = subject[j];
      const BevPoint& next = subject[(j + 1) % subject.size()];
      const bool current_in = edge_side(ca, cb, current) >= 0.0;
      const bool next_in = edge_side(ca, cb, next) >= 0.0;
      if (current_in) clipped.push_back(current);
      if (current_in != next_in) clipped.push_back(segment_intersection(current, next, ca, cb));
    }
    subject = std::move(clipped);
  }
  if (subject.size() < 3) return 0.0;
  return std::max(0.0, signed_area_of(subject));
}

double bev_iou(const BevPolygon& a, const BevPolygon& b) {
  const double area_a = polygon_area(a);
  const double area_b = polygon_area(b);
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double inter = convex_intersection_area(a, b);
  const double uni = area_a + area_b - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double rect_iou_2d(const Rect2D& a, const Rect2D& b) {
  const double area_a = a.width() * a.height();
  const double area_b = b.width() * b.height();
  if (area_a <= 0.0 || area_b <= 0.0) return 0.0;
  const double iw =
      std::min(a.right, b.right) - std::max(a.left, b.left);
  const double ih =
      std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (area_a + area_b - inter);
}

}  // namespace mono3d
