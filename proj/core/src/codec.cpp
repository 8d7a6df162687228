#include "mono3d/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mono3d {

GridCell make_grid_cell(int gx, int gy, const StratLevel& level) {
  GridCell cell;
  cell.center_u = (gx + 0.5) * level.stride;
  cell.center_v = (gy + 0.5) * level.stride;
  cell.level = level;
  return cell;
}

DecodedBox decode(const RawPrediction& raw, const GridCell& cell, const PresetSize& preset,
                  const CameraCalib& calib) {
  if (cell.level.z_min <= 0.0) {
    throw std::domain_error("level minimum depth must be positive");
  }
  DecodedBox box;
  const double z = cell.level.z_min * std::exp2(raw.log_z);
  box.center.x = (cell.center_u + raw.du - calib.cu) * z / calib.fu;
  box.center.y = (cell.center_v + raw.dv - calib.cv) * z / calib.fv;
  box.center.z = z;
  box.size.w = std::exp(raw.log_w) * preset.w0;
  box.size.l = std::exp(raw.log_l) * preset.l0;
  box.size.h = std::exp(raw.log_h) * preset.h0;
  box.angle = ObservationAngle::from_beta(raw.heading >= 0.5 ? raw.theta : -raw.theta);
  return box;
}

RawPrediction encode(const GroundTruthObject& gt, const GridCell& cell,
                     const PresetSize& preset, const CameraCalib& calib) {
  if (gt.center.z <= 0.0) throw std::domain_error("object depth must be positive");
  if (cell.level.z_min <= 0.0) {
    throw std::domain_error("level minimum depth must be positive");
  }
  if (gt.size.w <= 0.0 || gt.size.l <= 0.0 || gt.size.h <= 0.0) {
    throw std::domain_error("object size must be positive");
  }
  if (preset.w0 <= 0.0 || preset.l0 <= 0.0 || preset.h0 <= 0.0) {
    throw std::domain_error("preset size must be positive");
  }
  RawPrediction raw;
  const PixelPoint projected = project(gt.center, calib);
  raw.du = projected.u - cell.center_u;
  raw.dv = projected.v - cell.center_v;
  raw.log_z = std::log2(gt.center.z / cell.level.z_min);
  raw.log_w = std::log(gt.size.w / preset.w0);
  raw.log_l = std::log(gt.size.l / preset.l0);
  raw.log_h = std::log(gt.size.h / preset.h0);
  const ObservationAngle angle = beta_from_rotation_y(gt.rotation_y, gt.center);
  raw.theta = angle.theta;
  raw.heading = static_cast<double>(angle.heading);
  return raw;
}

PresetSize preset_from_dataset(std::span<const GroundTruthObject> objects,
                               std::string_view class_name) {
  PresetSize preset{0.0, 0.0, 0.0};
  int count = 0;
  for (const GroundTruthObject& object : objects) {
    if (object.class_name != class_name) continue;
    preset.w0 += object.size.w;
    preset.l0 += object.size.l;
    preset.h0 += object.size.h;
    ++count;
  }
  if (count == 0) {
    throw std::invalid_argument("no objects of class '" + std::string(class_name) + "'");
  }
  preset.w0 /= count;
  preset.l0 /= count;
  preset.h0 /= count;
  return preset;
}

}  // namespace mono3d
