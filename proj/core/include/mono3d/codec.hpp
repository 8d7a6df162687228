#ifndef MONO3D_CODEC_HPP
#define MONO3D_CODEC_HPP

#include <span>
#include <string_view>

#include "mono3d/geometry.hpp"
#include "mono3d/kitti.hpp"
#include "mono3d/stratify.hpp"
#include "mono3d/types.hpp"

namespace mono3d {

/// Network-output-space parameters of one box at one grid cell.
struct RawPrediction {
  double du = 0.0;      // pixel offset of the projected center from the cell center
  double dv = 0.0;
  double log_z = 0.0;   // log2 of depth over the level's minimum depth
  double log_w = 0.0;   // natural-log ratios of size over the class preset
  double log_l = 0.0;
  double log_h = 0.0;
  double heading = 1.0; // relaxed to [0,1]; decode thresholds at 0.5
  double theta = 0.0;   // angle offset, [0, pi/2)
};

/// A grid cell: its 2D center in pixels and the stratum it belongs to.
struct GridCell {
  double center_u = 0.0;
  double center_v = 0.0;
  StratLevel level;
};

GridCell make_grid_cell(int gx, int gy, const StratLevel& level);

/// Per-class mean 3D size used as the size-decode anchor.
struct PresetSize {
  double w0 = 0.0;
  double l0 = 0.0;
  double h0 = 0.0;
};

struct DecodedBox {
  Vec3 center;
  Size3D size;
  ObservationAngle angle;
};

/// Raw prediction -> 3D box:
///   z = z_min * 2^log_z
///   x = (cell_u + du - cu) * z / fu,  y = (cell_v + dv - cv) * z / fv
///   w = e^log_w * w0, l = e^log_l * l0, h = e^log_h * h0
///   beta = theta when heading >= 0.5, else -theta
DecodedBox decode(const RawPrediction& raw, const GridCell& cell,
                  const PresetSize& preset, const CameraCalib& calib);

/// Exact inverse of decode for a ground-truth box: decode(encode(gt))
/// reproduces the box's center, size and folded observation angle. Throws
/// std::domain_error when the object depth or the level minimum is not
/// positive.
RawPrediction encode(const GroundTruthObject& gt, const GridCell& cell,
                     const PresetSize& preset, const CameraCalib& calib);

/// Arithmetic mean 3D size over all objects of one class. Throws
/// std::invalid_argument when the class does not occur.
PresetSize preset_from_dataset(std::span<const GroundTruthObject> objects,
                               std::string_view class_name);

}  // namespace mono3d

#endif  // MONO3D_CODEC_HPP
