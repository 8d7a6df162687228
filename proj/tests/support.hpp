#ifndef MONO3D_TESTS_SUPPORT_HPP
#define MONO3D_TESTS_SUPPORT_HPP

// Shared helpers for the test binaries: random generators and independent
// reference implementations (oracles) used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mono3d/eval.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/kitti.hpp"

namespace testsup {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

// ---------------------------------------------------------------------------
// Monte-Carlo IoU oracle: estimates the intersection by uniform point
// sampling over the overlap of the two axis-aligned bounding boxes, testing
// membership with per-edge cross products. Shares no code with the clipping
// implementation under test.
// ---------------------------------------------------------------------------

inline bool point_in_convex(const mono3d::BevPolygon& poly, double x, double z) {
  for (std::size_t i = 0; i < poly.v.size(); ++i) {
    const mono3d::BevPoint& a = poly.v[i];
    const mono3d::BevPoint& b = poly.v[(i + 1) % poly.v.size()];
    const double cross = (b.x - a.x) * (z - a.z) - (b.z - a.z) * (x - a.x);
    if (cross < 0.0) return false;
  }
  return true;
}

inline double shoelace(const mono3d::BevPolygon& poly) {
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.v.size(); ++i) {
    const mono3d::BevPoint& a = poly.v[i];
    const mono3d::BevPoint& b = poly.v[(i + 1) % poly.v.size()];
    twice += a.x * b.z - b.x * a.z;
  }
  return 0.5 * twice;
}

inline double mc_bev_iou(const mono3d::BevPolygon& a, const mono3d::BevPolygon& b,
                         int samples, std::mt19937_64& rng) {
  double ax0 = a.v[0].x, ax1 = a.v[0].x, az0 = a.v[0].z, az1 = a.v[0].z;
  double bx0 = b.v[0].x, bx1 = b.v[0].x, bz0 = b.v[0].z, bz1 = b.v[0].z;
  for (const mono3d::BevPoint& p : a.v) {
    ax0 = std::min(ax0, p.x); ax1 = std::max(ax1, p.x);
    az0 = std::min(az0, p.z); az1 = std::max(az1, p.z);
  }
  for (const mono3d::BevPoint& p : b.v) {
    bx0 = std::min(bx0, p.x); bx1 = std::max(bx1, p.x);
    bz0 = std::min(bz0, p.z); bz1 = std::max(bz1, p.z);
  }
  const double x0 = std::max(ax0, bx0), x1 = std::min(ax1, bx1);
  const double z0 = std::max(az0, bz0), z1 = std::min(az1, bz1);
  if (x0 >= x1 || z0 >= z1) return 0.0;

  std::uniform_real_distribution<double> ux(x0, x1), uz(z0, z1);
  long long hits = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double z = uz(rng);
    if (point_in_convex(a, x, z) && point_in_convex(b, x, z)) ++hits;
  }
  const double inter = (x1 - x0) * (z1 - z0) * static_cast<double>(hits) / samples;
  const double uni = shoelace(a) + shoelace(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

// ---------------------------------------------------------------------------
// Gradient checking by central finite differences.
// ---------------------------------------------------------------------------

template <typename F>
double central_diff(F&& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline bool grad_close(double analytic, double numeric, double tol = 1e-5) {
  return std::abs(analytic - numeric) <=
         tol * std::max({1.0, std::abs(analytic), std::abs(numeric)});
}

// ---------------------------------------------------------------------------
// Object builders.
// ---------------------------------------------------------------------------

// A ground-truth row whose 2D box easily clears the strictest difficulty tier.
inline mono3d::GroundTruthObject make_gt(const std::string& class_name, double x, double y,
                                         double z, double h, double w, double l,
                                         double rotation_y) {
  mono3d::GroundTruthObject gt;
  gt.class_name = class_name;
  gt.truncation = 0.0;
  gt.occlusion = 0;
  gt.bbox = mono3d::Rect2D{100.0, 100.0, 200.0, 180.0};
  gt.size = mono3d::Size3D{h, w, l};
  gt.center = mono3d::Vec3{x, y, z};
  gt.rotation_y = rotation_y;
  gt.alpha = mono3d::beta_from_rotation_y(rotation_y, gt.center).beta;
  return gt;
}

inline mono3d::Detection det_from(const mono3d::GroundTruthObject& gt, double score) {
  mono3d::Detection det;
  static_cast<mono3d::GroundTruthObject&>(det) = gt;
  det.score = score;
  return det;
}

inline mono3d::GroundTruthObject random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-20.0, 20.0), uy(0.5, 2.5), uz(5.0, 80.0),
      uw(1.0, 3.0), ul(2.0, 6.0), uh(1.0, 2.5), uyaw(-mono3d::kPi, mono3d::kPi);
  return make_gt("Car", ux(rng), uy(rng), uz(rng), uh(rng), uw(rng), ul(rng), uyaw(rng));
}

// ---------------------------------------------------------------------------
// Brute-force average-precision oracle: re-runs greedy matching from scratch
// at every distinct score threshold instead of sweeping one sorted pass.
// ---------------------------------------------------------------------------

inline bool oracle_is_neighbor(const std::string& evaluated, const std::string& gt_class) {
  return (evaluated == "Car" && gt_class == "Van") ||
         (evaluated == "Pedestrian" && gt_class == "Person_sitting");
}

struct OracleCounts {
  int tp = 0;
  int fp = 0;
};

inline OracleCounts oracle_match_frame(const mono3d::Frame& frame,
                                       const std::string& class_name,
                                       mono3d::DifficultyLevel difficulty,
                                       double iou_threshold, mono3d::IouMode mode,
                                       double score_threshold) {
  struct Candidate {
    const mono3d::GroundTruthObject* gt;
    bool counted;
    bool taken = false;
  };
  std::vector<Candidate> gts;
  std::vector<const mono3d::GroundTruthObject*> dont_care;
  for (const mono3d::GroundTruthObject& gt : frame.gts) {
    if (gt.class_name == "DontCare") {
      dont_care.push_back(&gt);
    } else if (gt.class_name == class_name) {
      gts.push_back(Candidate{&gt, static_cast<int>(mono3d::classify_difficulty(gt)) <=
                                       static_cast<int>(difficulty)});
    } else if (oracle_is_neighbor(class_name, gt.class_name)) {
      gts.push_back(Candidate{&gt, false});
    }
  }
  std::vector<const mono3d::Detection*> dets;
  for (const mono3d::Detection& det : frame.dets) {
    if (det.class_name == class_name && det.score >= score_threshold) dets.push_back(&det);
  }
  std::stable_sort(dets.begin(), dets.end(), [](const mono3d::Detection* a,
                                                const mono3d::Detection* b) {
    return a->score > b->score;
  });

  OracleCounts counts;
  for (const mono3d::Detection* det : dets) {
    int best = -1;
    double best_iou = iou_threshold;
    for (std::size_t i = 0; i < gts.size(); ++i) {
      if (gts[i].taken) continue;
      const double iou = mode == mono3d::IouMode::Bev ? mono3d::iou_bev_boxes(*det, *gts[i].gt)
                                                      : mono3d::iou_3d(*det, *gts[i].gt);
      if (iou > best_iou || (best < 0 && iou == best_iou)) {
        best = static_cast<int>(i);
        best_iou = iou;
      }
    }
    if (best >= 0) {
      gts[static_cast<std::size_t>(best)].taken = true;
      counts.tp += gts[static_cast<std::size_t>(best)].counted ? 1 : 0;
      continue;
    }
    bool absorbed = false;
    for (const mono3d::GroundTruthObject* region : dont_care) {
      if (mono3d::rect_iou_2d(det->bbox, region->bbox) > 0.5) {
        absorbed = true;
        break;
      }
    }
    if (!absorbed) ++counts.fp;
  }
  return counts;
}

inline double oracle_ap(std::span<const mono3d::Frame> frames, const std::string& class_name,
                        mono3d::DifficultyLevel difficulty, double iou_threshold,
                        mono3d::IouMode mode, mono3d::PrInterp interp) {
  int num_gt = 0;
  std::vector<double> thresholds;
  for (const mono3d::Frame& frame : frames) {
    for (const mono3d::GroundTruthObject& gt : frame.gts) {
      if (gt.class_name == class_name &&
          static_cast<int>(mono3d::classify_difficulty(gt)) <=
              static_cast<int>(difficulty)) {
        ++num_gt;
      }
    }
    for (const mono3d::Detection& det : frame.dets) {
      if (det.class_name == class_name) thresholds.push_back(det.score);
    }
  }
  if (num_gt == 0) return 0.0;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<mono3d::PrPoint> curve;
  for (double threshold : thresholds) {
    OracleCounts totals;
    for (const mono3d::Frame& frame : frames) {
      const OracleCounts counts = oracle_match_frame(frame, class_name, difficulty,
                                                     iou_threshold, mode, threshold);
      totals.tp += counts.tp;
      totals.fp += counts.fp;
    }
    // A threshold where every included detection was absorbed yields no
    // precision-recall sample.
    if (totals.tp + totals.fp == 0) continue;
    curve.push_back(mono3d::PrPoint{static_cast<double>(totals.tp) / num_gt,
                                    static_cast<double>(totals.tp) /
                                        (totals.tp + totals.fp)});
  }

  auto interpolated = [&](double recall) {
    double best = 0.0;
    for (const mono3d::PrPoint& point : curve) {
      if (point.recall >= recall) best = std::max(best, point.precision);
    }
    return best;
  };
  double sum = 0.0;
  if (interp == mono3d::PrInterp::Points40) {
    for (int k = 1; k <= 40; ++k) sum += interpolated(k / 40.0);
    return sum / 40.0;
  }
  for (int k = 0; k <= 10; ++k) sum += interpolated(k / 10.0);
  return sum / 11.0;
}

}  // namespace testsup

#endif  // MONO3D_TESTS_SUPPORT_HPP
