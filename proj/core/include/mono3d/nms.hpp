#ifndef MONO3D_NMS_HPP
#define MONO3D_NMS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mono3d/kitti.hpp"

namespace mono3d {

struct NmsParams {
  double sigma = 0.9;        // Gaussian decay width of the suppression step
  double gamma = 20.0;       // density scale of the activation step
  double score_floor = 0.01; // boxes whose live score drops below this are discarded
  std::size_t top_k = 0;     // pipeline keeps at most this many boxes; 0 = no limit
};

/// Throws std::invalid_argument unless sigma > 0, gamma > 0, and
/// score_floor lies in [0, 1].
void validate_params(const NmsParams& params);

/// A detection with its live score. `input_index` pins the box's position in
/// the original list for deterministic tie-breaking; `density` caches the
/// box's crowding against the pre-suppression set once computed.
struct ScoredBox {
  Detection det;
  double score = 0.0;
  std::size_t input_index = 0;
  double density = 0.0;
};

/// Multiplicative decay exp(-iou^2 / sigma) applied to a neighbor's score
/// when a box is selected. Always in (0, 1].
double soft_nms_decay_factor(double iou, double sigma);

/// Multiplicative boost 2 - exp(-density / gamma) applied to a survivor's
/// score. Always in [1, 2).
double density_activation_factor(double density, double gamma);

/// Sum of squared BEV IoUs between `box` and every entry of `context` other
/// than the box itself (identified by input_index).
double box_density(const ScoredBox& box, std::span<const ScoredBox> context);

/// Gaussian soft suppression: repeatedly moves the highest-scoring remaining
/// box to the output and decays every other remaining score by
/// soft_nms_decay_factor(bev_iou, sigma). Boxes whose score falls below
/// params.score_floor are dropped. Output is sorted by score descending;
/// ties break by higher density, then lower input_index.
std::vector<ScoredBox> soft_nms(std::vector<ScoredBox> boxes, const NmsParams& params);

/// Rescores each box by its crowding within `all_boxes` (the pre-suppression
/// set): score *= density_activation_factor(box_density(...), gamma). Fills
/// each box's density field and re-sorts by the same ordering as soft_nms.
std::vector<ScoredBox> density_activate(std::vector<ScoredBox> boxes,
                                        std::span<const ScoredBox> all_boxes,
                                        const NmsParams& params);

/// Full post-processing pass: suppress with soft_nms, then boost survivors
/// that sit in dense clusters of the original detections, sort by final
/// score, and truncate to params.top_k when it is non-zero. Scores above 1
/// are kept as-is; they only rank detections.
std::vector<Detection> nms_pipeline(std::span<const Detection> detections,
                                    const NmsParams& params);

}  // namespace mono3d

#endif  // MONO3D_NMS_HPP
