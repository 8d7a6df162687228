#include "mono3d/nms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mono3d/geometry.hpp"

namespace mono3d {

namespace {

// Score descending, then density descending, then input order.
bool ranks_before(const ScoredBox& a, const ScoredBox& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.density != b.density) return a.density > b.density;
  return a.input_index < b.input_index;
}

}  // namespace

void validate_params(const NmsParams& params) {
  if (!(params.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(params.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(params.score_floor >= 0.0 && params.score_floor <= 1.0)) {
    throw std::invalid_argument("score floor must lie in [0, 1]");
  }
}

double soft_nms_decay_factor(double iou, double sigma) {
  return std::exp(-iou * iou / sigma);
}

double density_activation_factor(double density, double gamma) {
  return 2.0 - std::exp(-density / gamma);
}

double box_density(const ScoredBox& box, std::span<const ScoredBox> context) {
  const BevPolygon footprint = bev_footprint(box.det);
  double density = 0.0;
  for (const ScoredBox& other : context) {
    if (other.input_index == box.input_index) continue;
    const double iou = bev_iou(footprint, bev_footprint(other.det));
    density += iou * iou;
  }
  return density;
}

std::vector<ScoredBox> soft_nms(std::vector<ScoredBox> boxes, const NmsParams& params) {
  validate_params(params);

  struct Entry {
    ScoredBox box;
    BevPolygon footprint;
  };
  std::vector<Entry> remaining;
  remaining.reserve(boxes.size());
  for (ScoredBox& box : boxes) {
    if (box.score < params.score_floor) continue;
    BevPolygon footprint = bev_footprint(box.det);
    remaining.push_back(Entry{std::move(box), footprint});
  }

  std::vector<ScoredBox> kept;
  kept.reserve(remaining.size());
  while (!remaining.empty()) {
    auto best = std::min_element(
        remaining.begin(), remaining.end(),
        [](const Entry& a, const Entry& b) { return ranks_before(a.box, b.box); });
    Entry selected = std::move(*best);
    remaining.erase(best);
    for (Entry& entry : remaining) {
      const double iou = bev_iou(selected.footprint, entry.footprint);
      entry.box.score *= soft_nms_decay_factor(iou, params.sigma);
    }
    std::erase_if(remaining,
                  [&](const Entry& entry) { return entry.box.score < params.score_floor; });
    kept.push_back(std::move(selected.box));
  }
  std::sort(kept.begin(), kept.end(), ranks_before);
  return kept;
}

std::vector<ScoredBox> density_activate(std::vector<ScoredBox> boxes,
                                        std::span<const ScoredBox> all_boxes,
                                        const NmsParams& params) {
  validate_params(params);
  for (ScoredBox& box : boxes) {
    box.density = box_density(box, all_boxes);
    box.score *= density_activation_factor(box.density, params.gamma);
  }
  std::sort(boxes.begin(), boxes.end(), ranks_before);
  return boxes;
}

std::vector<Detection> nms_pipeline(std::span<const Detection> detections,
                                    const NmsParams& params) {
  validate_params(params);
  std::vector<ScoredBox> scored;
  scored.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    scored.push_back(ScoredBox{detections[i], detections[i].score, i, 0.0});
  }
  // Densities are fixed by the input set; computing them up front makes the
  // suppression tie-break independent of the processing order.
  for (ScoredBox& box : scored) box.density = box_density(box, scored);

  std::vector<ScoredBox> kept = soft_nms(scored, params);
  kept = density_activate(std::move(kept), scored, params);
  if (params.top_k > 0 && kept.size() > params.top_k) kept.resize(params.top_k);

  std::vector<Detection> out;
  out.reserve(kept.size());
  for (const ScoredBox& box : kept) {
    Detection det = box.det;
    det.score = box.score;
    out.push_back(std::move(det));
  }
  return out;
}

}  // namespace mono3d
