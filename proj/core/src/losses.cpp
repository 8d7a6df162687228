#include "mono3d/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mono3d/geometry.hpp"

namespace mono3d {

LossValue angle_loss_mds(double theta, double theta_hat, double alpha, double alpha_hat) {
  const double dt = theta - theta_hat;
  const double da = alpha - alpha_hat;
  const double weight = std::sin(2.0 * theta);
  LossValue loss;
  loss.value = dt * dt + da * da * weight;
  loss.gradient = {-2.0 * dt, -2.0 * da * weight};
  return loss;
}

LossValue angle_loss_second(double beta, double beta_hat) {
  const double delta = beta - beta_hat;
  const double s = std::sin(delta);
  LossValue loss;
  double slope;  // d SmoothL1 / d s, transition point 1
  if (std::abs(s) < 1.0) {
    loss.value = 0.5 * s * s;
    slope = s;
  } else {
    loss.value = std::abs(s) - 0.5;
    slope = s > 0.0 ? 1.0 : -1.0;
  }
  loss.gradient = {-slope * std::cos(delta)};
  return loss;
}

LossValue angle_loss_naive(double beta, double beta_hat) {
  const double delta = beta - beta_hat;
  LossValue loss;
  loss.value = delta * delta;
  loss.gradient = {-2.0 * delta};
  return loss;
}

LossValue qfl(double prediction, double target, double beta_exponent) {
  if (!(prediction > 0.0 && prediction < 1.0)) {
    throw std::domain_error("prediction must lie strictly inside (0, 1)");
  }
  if (!(target >= 0.0 && target <= 1.0)) {
    throw std::invalid_argument("target must lie in [0, 1]");
  }
  const double gap = std::abs(target - prediction);
  const double cross_entropy =
      -((1.0 - target) * std::log(1.0 - prediction) + target * std::log(prediction));
  LossValue loss;
  loss.value = std::pow(gap, beta_exponent) * cross_entropy;
  const double sign = prediction > target ? 1.0 : (prediction < target ? -1.0 : 0.0);
  const double d_gap = beta_exponent * std::pow(gap, beta_exponent - 1.0) * sign;
  const double d_cross_entropy =
      (1.0 - target) / (1.0 - prediction) - target / prediction;
  loss.gradient = {d_gap * cross_entropy + std::pow(gap, beta_exponent) * d_cross_entropy};
  return loss;
}

LossValue l2_loss(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) {
    throw std::invalid_argument("predicted and target lengths differ");
  }
  LossValue loss;
  loss.gradient.resize(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - target[i];
    loss.value += d * d;
    loss.gradient[i] = 2.0 * d;
  }
  return loss;
}

double confidence_target(DifficultyLevel level) {
  switch (level) {
    case DifficultyLevel::Easy: return 1.0;
    case DifficultyLevel::Moderate: return 0.8;
    case DifficultyLevel::Hard: return 0.6;
    default: return 0.4;
  }
}

double centerness_target(const Rect2D& bbox, PixelPoint cell_center) {
  const double du = cell_center.u - bbox.center_u();
  const double dv = cell_center.v - bbox.center_v();
  const double d = std::hypot(du, dv);
  const double d_max = 0.5 * std::hypot(bbox.width(), bbox.height());
  if (d_max <= 0.0) return d <= 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - d / d_max, 0.0, 1.0);
}

ScoreChannels make_score_targets(const GroundTruthObject& gt, PixelPoint cell_center,
                                 double iou_target) {
  if (!(iou_target >= 0.0 && iou_target <= 1.0)) {
    throw std::invalid_argument("IoU target must lie in [0, 1]");
  }
  ScoreChannels targets;
  targets.confidence = confidence_target(classify_difficulty(gt));
  targets.centerness = centerness_target(gt.bbox, cell_center);
  targets.iou = iou_target;
  return targets;
}

LossValue total_loss(std::span<const ScoreChannels> predicted_scores,
                     std::span<const ScoreChannels> target_scores,
                     std::span<const RawPrediction> predicted_boxes,
                     std::span<const RawPrediction> target_boxes, const LabelGrid& labels,
                     double qfl_beta) {
  const std::size_t cells = labels.cells.size();
  if (predicted_scores.size() != cells || target_scores.size() != cells ||
      predicted_boxes.size() != cells || target_boxes.size() != cells) {
    throw std::invalid_argument("component grids must match the label grid");
  }
  LossValue total;
  total.gradient.assign(cells * kTotalLossSlotsPerCell, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    const PixelLabelKind kind = labels.cells[i].kind;
    if (kind == PixelLabelKind::Ignore) continue;
    double* slots = &total.gradient[i * kTotalLossSlotsPerCell];

    const ScoreChannels& p = predicted_scores[i];
    const ScoreChannels& t = target_scores[i];
    const double preds[3] = {p.confidence, p.centerness, p.iou};
    const double targets[3] = {t.confidence, t.centerness, t.iou};
    for (int c = 0; c < 3; ++c) {
      const LossValue channel = qfl(preds[c], targets[c], qfl_beta);
      total.value += channel.value;
      slots[c] = channel.gradient[0];
    }
    if (kind != PixelLabelKind::Positive) continue;

    const RawPrediction& pb = predicted_boxes[i];
    const RawPrediction& tb = target_boxes[i];
    const double loc_pred[3] = {pb.du, pb.dv, pb.log_z};
    const double loc_target[3] = {tb.du, tb.dv, tb.log_z};
    const LossValue loc = l2_loss(loc_pred, loc_target);
    const double size_pred[3] = {pb.log_w, pb.log_l, pb.log_h};
    const double size_target[3] = {tb.log_w, tb.log_l, tb.log_h};
    const LossValue size = l2_loss(size_pred, size_target);
    const LossValue angle = angle_loss_mds(tb.theta, pb.theta, tb.heading, pb.heading);
    total.value += loc.value + size.value + angle.value;
    for (int c = 0; c < 3; ++c) {
      slots[3 + c] = loc.gradient[static_cast<std::size_t>(c)];
      slots[6 + c] = size.gradient[static_cast<std::size_t>(c)];
    }
    slots[9] = angle.gradient[0];
    slots[10] = angle.gradient[1];
  }
  return total;
}

}  // namespace mono3d
