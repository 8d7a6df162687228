#ifndef MONO3D_EVAL_HPP
#define MONO3D_EVAL_HPP

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mono3d/geometry.hpp"
#include "mono3d/kitti.hpp"

namespace mono3d {

/// KITTI difficulty tiers. Thresholds are monotone, so every Easy object
/// also satisfies the Moderate and Hard criteria; Unknown fails all three.
enum class DifficultyLevel { Easy = 0, Moderate = 1, Hard = 2, Unknown = 3 };

/// Devkit difficulty cascade, strictest tier first:
///   Easy:     bbox height >= 40 px, occlusion 0,    truncation <= 0.15
///   Moderate: bbox height >= 25 px, occlusion <= 1, truncation <= 0.30
///   Hard:     bbox height >= 25 px, occlusion <= 2, truncation <= 0.50
DifficultyLevel classify_difficulty(const GroundTruthObject& gt);

const char* to_string(DifficultyLevel level);

enum class IouMode { Bev, Box3D };
enum class PrInterp { Points40, Points11 };

/// Volumetric IoU: BEV intersection area times vertical overlap, over the
/// union of the two box volumes. KITTI boxes hang from their center point
/// (y spans [center.y - h, center.y]).
double iou_3d(const GroundTruthObject& a, const GroundTruthObject& b);

/// BEV IoU of two label rows' footprints.
double iou_bev_boxes(const GroundTruthObject& a, const GroundTruthObject& b);

/// Ground truth and detections for one image.
struct Frame {
  std::vector<GroundTruthObject> gts;
  std::vector<Detection> dets;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ApResult {
  bool has_data = false;  // false when no ground truth is counted at this difficulty
  double ap = 0.0;        // fraction in [0, 1]
  int num_gt = 0;         // counted ground-truth boxes (recall denominator)
  std::vector<PrPoint> curve;  // one point per distinct score threshold
};

/// KITTI-protocol average precision for one class at one difficulty.
///
/// Matching is greedy per frame in descending score order: each detection of
/// the class takes the unmatched ground-truth candidate with the highest IoU
/// at or above `iou_threshold`. Ground truth of the class that fails the
/// requested difficulty, and the devkit neighbor classes (Van for Car,
/// Person_sitting for Pedestrian), can absorb detections but count neither
/// as hit nor miss; unmatched detections overlapping a DontCare region with
/// 2D IoU above 0.5 are likewise dropped from scoring. The PR curve holds
/// one point per distinct score threshold, and AP averages the interpolated
/// precision max{p(r') : r' >= r} at r = k/40, k = 1..40 (or at the eleven
/// points k/10, k = 0..10).
ApResult evaluate_ap(std::span<const Frame> frames, const std::string& class_name,
                     DifficultyLevel difficulty, double iou_threshold, IouMode mode,
                     PrInterp interp);

struct DepthErrorBin {
  double z_lo = 0.0;
  double z_hi = 0.0;
  int count = 0;
  double mean_abs_error = 0.0;
};

/// Absolute depth error of every ground-truth object's best-matching
/// detection, accumulated into 10 m bins over [0, 80].
struct DepthErrorReport {
  std::array<DepthErrorBin, 8> bins{};
  int matched = 0;
  int unmatched = 0;  // ground truth in range with no detection above the IoU floor
};

/// For each non-DontCare ground-truth object (optionally restricted to
/// `class_filter`), finds the same-class detection with the highest BEV IoU
/// at or above `match_iou_threshold` and bins |z_det - z_gt| by the object
/// depth. Detections may serve several ground-truth objects; objects outside
/// [0, 80] m are skipped.
DepthErrorReport depth_error_report(std::span<const Frame> frames,
                                    double match_iou_threshold = 0.1,
                                    std::string_view class_filter = {});

}  // namespace mono3d

#endif  // MONO3D_EVAL_HPP
