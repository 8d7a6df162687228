#include "mono3d/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mono3d {

DifficultyLevel classify_difficulty(const GroundTruthObject& gt) {
  const double height = gt.bbox.height();
  if (height >= 40.0 && gt.occlusion <= 0 && gt.truncation <= 0.15) {
    return DifficultyLevel::Easy;
  }
  if (height >= 25.0 && gt.occlusion <= 1 && gt.truncation <= 0.30) {
    return DifficultyLevel::Moderate;
  }
  if (height >= 25.0 && gt.occlusion <= 2 && gt.truncation <= 0.50) {
    return DifficultyLevel::Hard;
  }
  return DifficultyLevel::Unknown;
}

const char* to_string(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return "Easy";
    case DifficultyLevel::Moderate: return "Moderate";
    case DifficultyLevel::Hard: return "Hard";
    default: return "Unknown";
  }
}

double iou_bev_boxes(const GroundTruthObject& a, const GroundTruthObject& b) {
  return bev_iou(bev_footprint(a), bev_footprint(b));
}

double iou_3d(const GroundTruthObject& a, const GroundTruthObject& b) {
  const double vol_a = a.size.w * a.size.l * a.size.h;
  const double vol_b = b.size.w * b.size.l * b.size.h;
  if (vol_a <= 0.0 || vol_b <= 0.0) return 0.0;
  const double inter_area = convex_intersection_area(bev_footprint(a), bev_footprint(b));
  // Boxes hang downward from the bottom-face anchor: y spans [center.y - h, center.y].
  const double overlap = std::min(a.center.y, b.center.y) -
                         std::max(a.center.y - a.size.h, b.center.y - b.size.h);
  if (overlap <= 0.0) return 0.0;
  const double inter_vol = inter_area * overlap;
  const double union_vol = vol_a + vol_b - inter_vol;
  if (union_vol <= 0.0) return 0.0;
  return inter_vol / union_vol;
}

namespace {

// The devkit treats these lookalike classes as absorbing: their ground truth
// may consume a detection of the evaluated class without scoring it.
bool is_neighbor_class(const std::string& evaluated, const std::string& gt_class) {
  if (evaluated == "Car") return gt_class == "Van";
  if (evaluated == "Pedestrian") return gt_class == "Person_sitting";
  return false;
}

struct ScoredOutcome {
  double score = 0.0;
  bool true_positive = false;
};

// One frame's worth of greedy matching. Appends (score, tp/fp) outcomes and
// returns the number of counted ground-truth boxes.
int match_frame(const Frame& frame, const std::string& class_name,
                DifficultyLevel difficulty, double iou_threshold, IouMode mode,
                std::vector<ScoredOutcome>& outcomes) {
  // Candidate ground truth: counted boxes score matches, absorbing boxes
  // (harder than requested, or a lookalike class) only consume detections.
  struct GtEntry {
    const GroundTruthObject* gt;
    bool counted;
    bool taken = false;
  };
  std::vector<GtEntry> gts;
  std::vector<const GroundTruthObject*> dont_care;
  int num_counted = 0;
  for (const GroundTruthObject& gt : frame.gts) {
    if (gt.class_name == "DontCare") {
      dont_care.push_back(&gt);
      continue;
    }
    if (gt.class_name == class_name) {
      const bool counted = static_cast<int>(classify_difficulty(gt)) <=
                           static_cast<int>(difficulty);
      gts.push_back(GtEntry{&gt, counted});
      num_counted += counted ? 1 : 0;
    } else if (is_neighbor_class(class_name, gt.class_name)) {
      gts.push_back(GtEntry{&gt, false});
    }
  }

  std::vector<const Detection*> dets;
  for (const Detection& det : frame.dets) {
    if (det.class_name == class_name) dets.push_back(&det);
  }
  std::stable_sort(dets.begin(), dets.end(),
                   [](const Detection* a, const Detection* b) { return a->score > b->score; });

  for (const Detection* det : dets) {
    int best = -1;
    double best_iou = iou_threshold;
    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (gts[i].taken) continue;
      const double iou =
          mode == IouMode::Bev ? iou_bev_boxes(*det, *gts[i].gt) : iou_3d(*det, *gts[i].gt);
      if (iou > best_iou || (best < 0 && iou == best_iou)) {
        best = static_cast<int>(i);
        best_iou = iou;
      }
    }
    if (best >= 0) {
      gts[static_cast<std::size_t>(best)].taken = true;
      if (gts[static_cast<std::size_t>(best)].counted) {
        outcomes.push_back(ScoredOutcome{det->score, true});
      }
      continue;
    }
    bool in_dont_care = false;
    for (const GroundTruthObject* region : dont_care) {
      if (rect_iou_2d(det->bbox, region->bbox) > 0.5) {
        in_dont_care = true;
        break;
      }
    }
    if (!in_dont_care) outcomes.push_back(ScoredOutcome{det->score, false});
  }
  return num_counted;
}

}  // namespace

ApResult evaluate_ap(std::span<const Frame> frames, const std::string& class_name,
                     DifficultyLevel difficulty, double iou_threshold, IouMode mode,
                     PrInterp interp) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw std::invalid_argument("IoU threshold must lie in (0, 1)");
  }
  std::vector<ScoredOutcome> outcomes;
  ApResult result;
  for (const Frame& frame : frames) {
    result.num_gt += match_frame(frame, class_name, difficulty, iou_threshold, mode, outcomes);
  }
  if (result.num_gt == 0) return result;  // has_data stays false
  result.has_data = true;

  // One PR point per distinct score: counts over all outcomes at or above it.
  std::sort(outcomes.begin(), outcomes.end(),
            [](const ScoredOutcome& a, const ScoredOutcome& b) { return a.score > b.score; });
  int tp = 0;
  int fp = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    tp += outcomes[i].true_positive ? 1 : 0;
    fp += outcomes[i].true_positive ? 0 : 1;
    if (i + 1 < outcomes.size() && outcomes[i + 1].score == outcomes[i].score) continue;
    result.curve.push_back(PrPoint{static_cast<double>(tp) / result.num_gt,
                                   static_cast<double>(tp) / (tp + fp)});
  }

  // Interpolated precision: best precision at recall >= r, zero past the curve.
  auto interpolated = [&](double recall) {
    double best = 0.0;
    for (const PrPoint& point : result.curve) {
      if (point.recall >= recall) best = std::max(best, point.precision);
    }
    return best;
  };
  if (interp == PrInterp::Points40) {
    double sum = 0.0;
    for (int k = 1; k <= 40; ++k) sum += interpolated(k / 40.0);
    result.ap = sum / 40.0;
  } else {
    double sum = 0.0;
    for (int k = 0; k <= 10; ++k) sum += interpolated(k / 10.0);
    result.ap = sum / 11.0;
  }
  return result;
}

DepthErrorReport depth_error_report(std::span<const Frame> frames,
                                    double match_iou_threshold,
                                    std::string_view class_filter) {
  DepthErrorReport report;
  std::array<double, 8> error_sums{};
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    report.bins[b].z_lo = 10.0 * static_cast<double>(b);
    report.bins[b].z_hi = 10.0 * static_cast<double>(b + 1);
  }
  for (const Frame& frame : frames) {
    for (const GroundTruthObject& gt : frame.gts) {
      if (gt.class_name == "DontCare") continue;
      if (!class_filter.empty() && gt.class_name != class_filter) continue;
      const double z = gt.center.z;
      if (z < 0.0 || z > 80.0) continue;
      const Detection* best = nullptr;
      double best_iou = match_iou_threshold;
      for (const Detection& det : frame.dets) {
        if (det.class_name != gt.class_name) continue;
        const double iou = iou_bev_boxes(det, gt);
        if (iou > best_iou || (best == nullptr && iou == best_iou)) {
          best = &det;
          best_iou = iou;
        }
      }
      if (best == nullptr) {
        ++report.unmatched;
        continue;
      }
      const std::size_t bin = std::min<std::size_t>(7, static_cast<std::size_t>(z / 10.0));
      ++report.bins[bin].count;
      error_sums[bin] += std::abs(best->center.z - z);
      ++report.matched;
    }
  }
  for (std::size_t b = 0; b < report.bins.size(); ++b) {
    if (report.bins[b].count > 0) {
      report.bins[b].mean_abs_error = error_sums[b] / report.bins[b].count;
    }
  }
  return report;
}

}  // namespace mono3d
