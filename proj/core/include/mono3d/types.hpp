#ifndef MONO3D_TYPES_HPP
#define MONO3D_TYPES_HPP

namespace mono3d {

/// Point in the camera coordinate frame (meters). x right, y down, z forward.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// 3D box extents in meters, in KITTI label order (height, width, length).
struct Size3D {
  double h = 0.0;
  double w = 0.0;
  double l = 0.0;
};

/// Axis-aligned image rectangle in pixels.
struct Rect2D {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double center_u() const { return 0.5 * (left + right); }
  double center_v() const { return 0.5 * (top + bottom); }
};

/// Image point in pixels.
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;
};

}  // namespace mono3d

#endif  // MONO3D_TYPES_HPP
