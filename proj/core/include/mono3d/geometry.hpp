#ifndef MONO3D_GEOMETRY_HPP
#define MONO3D_GEOMETRY_HPP

#include <array>

#include "mono3d/kitti.hpp"
#include "mono3d/types.hpp"

namespace mono3d {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
double wrap_to_pi(double angle);

/// Observation angle of a box relative to the camera viewing ray, folded into
/// (-pi/2, pi/2] by the pi-periodic symmetry of a 3D box (a box and the same
/// box rotated by pi have identical footprints). `heading` is the binary
/// forward/backward state and `theta` the magnitude, so that
/// beta == (heading ? theta : -theta).
struct ObservationAngle {
  double beta = 0.0;  // (-pi/2, pi/2]
  int heading = 1;    // 1 when beta >= 0, else 0
  double theta = 0.0; // |beta|, in [0, pi/2]

  static ObservationAngle from_beta(double beta);
};

/// Folds an arbitrary angle into the (-pi/2, pi/2] observation range.
/// Angles in (pi/2, pi] map down by pi, angles in (-pi, -pi/2] map up by pi;
/// the -pi/2 boundary therefore lands on +pi/2.
ObservationAngle fold_observation_angle(double angle);

/// Observation angle of an object at `center` with global yaw `rotation_y`:
/// fold(rotation_y - atan2(x, z)).
ObservationAngle beta_from_rotation_y(double rotation_y, const Vec3& center);

/// Recovers the global yaw (up to the pi fold) from an observation angle and
/// the viewing ray toward `center`.
double yaw_from_observation(const ObservationAngle& angle, const Vec3& center);

/// Pinhole projection of a camera-frame point. Throws std::domain_error for
/// points at or behind the image plane (z <= 0).
PixelPoint project(const Vec3& point, const CameraCalib& calib);

/// Inverse of project at a known depth. Throws std::domain_error when z <= 0.
Vec3 back_project(const PixelPoint& pixel, double z, const CameraCalib& calib);

/// Ground-plane point: camera-frame (x, z), y dropped.
struct BevPoint {
  double x = 0.0;
  double z = 0.0;
};

/// Convex quadrilateral footprint on the ground plane, counter-clockwise in
/// the (x, z) plane.
struct BevPolygon {
  std::array<BevPoint, 4> v{};
};

/// Rectangle footprint centered at (cx, cz). At yaw 0 the width spans x and
/// the length spans z (an object at yaw 0 faces the camera); positive yaw
/// rotates counter-clockwise in the (x, z) plane. Degenerate sizes are
/// allowed and produce zero-area polygons.
BevPolygon bev_rect(double cx, double cz, double width, double length, double yaw);

/// Footprint of a box given through its folded observation angle; the global
/// yaw is recovered from the viewing ray. Throws std::domain_error when the
/// width or length is not positive.
BevPolygon box_corners_bev(const Vec3& center, const Size3D& size,
                           const ObservationAngle& angle);

/// Footprint of a parsed label/detection row, using its raw rotation_y.
/// Produces the same corner set as going through the folded observation
/// angle.
BevPolygon bev_footprint(const GroundTruthObject& object);

/// Signed shoelace area; positive for counter-clockwise polygons.
double polygon_area(const BevPolygon& poly);

/// Area of the intersection of two convex CCW quadrilaterals
/// (Sutherland-Hodgman clipping).
double convex_intersection_area(const BevPolygon& a, const BevPolygon& b);

/// Intersection over union of two footprints. Symmetric, in [0, 1];
/// degenerate (zero or negative area) inputs yield 0.
double bev_iou(const BevPolygon& a, const BevPolygon& b);

/// Intersection over union of two axis-aligned image rectangles.
double rect_iou_2d(const Rect2D& a, const Rect2D& b);

}  // namespace mono3d

#endif  // MONO3D_GEOMETRY_HPP
