#ifndef MONO3D_LOSSES_HPP
#define MONO3D_LOSSES_HPP

#include <span>
#include <vector>

#include "mono3d/codec.hpp"
#include "mono3d/eval.hpp"
#include "mono3d/stratify.hpp"
#include "mono3d/types.hpp"

namespace mono3d {

/// A scalar loss together with its analytic partial derivatives with respect
/// to each predicted input. The gradient ordering is documented per function.
struct LossValue {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Heading-split angle loss
///   L = (theta - theta_hat)^2 + (alpha - alpha_hat)^2 * sin(2*theta)
/// where theta in [0, pi/2) is the angle magnitude and alpha in [0, 1] is the
/// (relaxed, continuous) heading bit. The sin(2*theta) weight mutes the
/// heading penalty near 0 and pi/2, where flipping the heading barely moves
/// the box. Gradient: {d/d theta_hat, d/d alpha_hat}.
LossValue angle_loss_mds(double theta, double theta_hat, double alpha, double alpha_hat);

/// Sine-error angle loss: SmoothL1(sin(beta - beta_hat)) with transition
/// point 1.0. Flat (zero gradient) at |beta - beta_hat| = pi/2, where the
/// predicted box is perpendicular to the truth. Gradient: {d/d beta_hat}.
LossValue angle_loss_second(double beta, double beta_hat);

/// Plain squared radian offset (beta - beta_hat)^2. Penalizes an offset of
/// pi maximally even though the boxes then coincide. Gradient: {d/d beta_hat}.
LossValue angle_loss_naive(double beta, double beta_hat);

/// Quality Focal Loss for a soft target:
///   L = -|target - p|^beta_exponent * ((1-target)*log(1-p) + target*log(p))
/// Gradient: {d/d p}. Throws std::domain_error when p lies outside the open
/// interval (0, 1) and std::invalid_argument when target is outside [0, 1].
LossValue qfl(double prediction, double target, double beta_exponent = 2.0);

/// Sum of squared differences between two equal-length vectors. Gradient has
/// one entry 2*(p_i - t_i) per predicted element. Throws std::invalid_argument
/// on length mismatch.
LossValue l2_loss(std::span<const double> predicted, std::span<const double> target);

/// The three regression targets attached to every score cell: a piecewise
/// confidence level, a center-ness falloff, and a box-quality IoU. The same
/// triple shape carries the network's predicted scores.
struct ScoreChannels {
  double confidence = 0.0;
  double centerness = 0.0;
  double iou = 0.0;
};

/// Piecewise confidence target by difficulty tier:
/// Easy 1.0, Moderate 0.8, Hard 0.6, everything else 0.4.
double confidence_target(DifficultyLevel level);

/// Center-ness target 1 - d / d_max, clamped to [0, 1], where d is the pixel
/// distance from the cell center to the 2D box center and d_max is the box's
/// half-diagonal. A degenerate box yields 1 at its center and 0 elsewhere.
double centerness_target(const Rect2D& bbox, PixelPoint cell_center);

/// Assembles the target triple for one positive cell. `iou_target` is the
/// BEV IoU of the decoded prediction against the ground truth; throws
/// std::invalid_argument if it lies outside [0, 1].
ScoreChannels make_score_targets(const GroundTruthObject& gt, PixelPoint cell_center,
                                 double iou_target);

/// Total training loss over one label grid:
///
///   L = L_c + L_3d
///
/// L_c applies QFL to the confidence, center-ness, and IoU channels of every
/// Positive and Negative cell. L_3d applies, on Positive cells only, an L2
/// loss over (du, dv, log_z), an L2 loss over (log_w, log_l, log_h), and the
/// heading-split angle loss over (theta, heading). Ignore cells contribute
/// nothing. All component weights are 1.
///
/// The four spans run in grid row-major order (cell index gy*width + gx) and
/// must match labels.cells in length. The gradient holds 11 slots per cell:
///   [confidence, centerness, iou, du, dv, log_z, log_w, log_l, log_h,
///    theta, heading]
/// with zeros for channels a cell's label kind does not touch.
/// Throws std::invalid_argument on any length mismatch.
LossValue total_loss(std::span<const ScoreChannels> predicted_scores,
                     std::span<const ScoreChannels> target_scores,
                     std::span<const RawPrediction> predicted_boxes,
                     std::span<const RawPrediction> target_boxes,
                     const LabelGrid& labels, double qfl_beta = 2.0);

/// Number of gradient slots total_loss emits per grid cell.
inline constexpr int kTotalLossSlotsPerCell = 11;

}  // namespace mono3d

#endif  // MONO3D_LOSSES_HPP
