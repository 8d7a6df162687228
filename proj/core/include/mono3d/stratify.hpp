#ifndef MONO3D_STRATIFY_HPP
#define MONO3D_STRATIFY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "mono3d/kitti.hpp"
#include "mono3d/types.hpp"

namespace mono3d {

/// One depth stratum tied to a feature-map stride. `z_min` doubles as the
/// minimum depth the stratum's head regresses (the depth-decode base).
struct StratLevel {
  int index = 0;
  int stride = 0;      // pixels per grid cell, a positive power of two
  double z_min = 0.0;  // meters, inclusive
  double z_max = 0.0;  // meters, exclusive except for the last level
};

/// Ordered strata plus the global predictable depth range. Consecutive level
/// ranges overlap; their union covers [z_lo, z_hi].
struct StratConfig {
  std::vector<StratLevel> levels;
  double z_lo = 0.0;
  double z_hi = 0.0;
};

/// The three-level configuration: strides 8/16/32 covering 5-20 m, 10-40 m
/// and 20-80 m, with a global predictable range of [5, 80] m. Each level
/// spans 4x its minimum depth and consecutive minimums double.
StratConfig default_strat_config();

/// Validates ordering, positive power-of-two strides, range coverage and
/// consecutive overlap. Throws std::invalid_argument on violation.
void validate_config(const StratConfig& config);

/// Indices of all levels whose depth range contains z. Ranges are half-open
/// [z_min, z_max) except the last level, which is closed at z_max so the far
/// end of the global range stays assignable. Empty outside [z_lo, z_hi].
std::vector<int> levels_for_depth(double z, const StratConfig& config);

/// Depth from the projected 2D width: z = fu * w3d / w2d + l3d / 2.
/// Throws std::domain_error when w2d <= 0.
double depth_from_2d_width(double w2d, const Size3D& size, const CameraCalib& calib);

/// Depth from the projected 2D height: z = fv * h3d / h2d + l3d / 2.
/// Throws std::domain_error when h2d <= 0.
double depth_from_2d_height(double h2d, const Size3D& size, const CameraCalib& calib);

/// Labels plus calibration for one image.
struct LabeledFrame {
  std::vector<GroundTruthObject> objects;
  CameraCalib calib;
};

struct FitPoint {
  double h2d = 0.0;
  double z3d = 0.0;
};

/// Scatter of (2D box height, depth) over a set of labels, with the
/// height-form depth model evaluated at the mean 3D size overlaid as a
/// sampled curve.
struct FitCurve {
  std::vector<FitPoint> scatter;
  std::vector<FitPoint> curve;   // monotone decreasing in h2d
  double mean_h3d = 0.0;
  double mean_l3d = 0.0;
  double mean_fv = 0.0;
};

/// Builds the scatter/curve pair from per-frame labels. DontCare rows and
/// rows with non-positive 2D height or depth are skipped; the curve uses the
/// mean fv across frames and is sampled at `curve_samples` heights spanning
/// the scatter. Throws std::invalid_argument when nothing usable remains.
FitCurve fit_curve_points(std::span<const LabeledFrame> frames, int curve_samples = 100);

enum class PixelLabelKind : std::uint8_t { Negative, Positive, Ignore };

/// Per-cell assignment; `object_index` refers into the input object list and
/// is only meaningful for Positive cells.
struct PixelLabel {
  PixelLabelKind kind = PixelLabelKind::Negative;
  int object_index = -1;
};

/// Dense per-cell label grid for one stratum (row-major, width x height).
struct LabelGrid {
  int width = 0;
  int height = 0;
  std::vector<PixelLabel> cells;

  PixelLabel& at(int gx, int gy) { return cells[static_cast<size_t>(gy) * width + gx]; }
  const PixelLabel& at(int gx, int gy) const {
    return cells[static_cast<size_t>(gy) * width + gx];
  }
};

/// Assigns every grid cell of the given level to Positive / Negative /
/// Ignore. A cell belongs to an object when its center pixel lies inside the
/// object's 2D box (bounds inclusive). Cells covered by at least one object
/// within the level's depth range are Positive for the closest such object
/// by z; cells covered only by out-of-range objects are Ignore (this takes
/// in objects beyond the global range, DontCare rows included — their
/// sentinel depth is never in range); uncovered cells are Negative. Grid
/// dimensions are ceil(image size / stride).
LabelGrid assign_targets(std::span<const GroundTruthObject> objects,
                         const StratConfig& config, int level_index,
                         int image_width, int image_height);

}  // namespace mono3d

#endif  // MONO3D_STRATIFY_HPP
