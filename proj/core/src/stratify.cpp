#include "mono3d/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mono3d {

namespace {

bool is_power_of_two(int value) { return value > 0 && (value & (value - 1)) == 0; }

// Half-open [z_min, z_max), closed at z_max for the last level so the far end
// of the global range stays assignable.
bool depth_in_level(double z, const StratConfig& config, std::size_t index) {
  if (z < config.z_lo || z > config.z_hi) return false;
  const StratLevel& level = config.levels[index];
  if (z < level.z_min) return false;
  if (index + 1 == config.levels.size()) return z <= level.z_max;
  return z < level.z_max;
}

}  // namespace

StratConfig default_strat_config() {
  StratConfig config;
  config.levels = {StratLevel{0, 8, 5.0, 20.0}, StratLevel{1, 16, 10.0, 40.0},
                   StratLevel{2, 32, 20.0, 80.0}};
  config.z_lo = 5.0;
  config.z_hi = 80.0;
  return config;
}

void validate_config(const StratConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("no stratification levels");
  if (!(config.z_lo < config.z_hi)) {
    throw std::invalid_argument("global depth range is empty");
  }
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    const StratLevel& level = config.levels[i];
    if (!is_power_of_two(level.stride)) {
      throw std::invalid_argument("level " + std::to_string(i) +
                                  ": stride must be a positive power of two");
    }
    if (!(level.z_min < level.z_max)) {
      throw std::invalid_argument("level " + std::to_string(i) + ": empty depth range");
    }
    if (i > 0) {
      const StratLevel& prev = config.levels[i - 1];
      if (!(prev.z_min < level.z_min)) {
        throw std::invalid_argument("levels must be ordered by ascending minimum depth");
      }
      if (!(level.z_min < prev.z_max)) {
        throw std::invalid_argument("consecutive level ranges must overlap");
      }
    }
  }
  if (config.levels.front().z_min > config.z_lo ||
      config.levels.back().z_max < config.z_hi) {
    throw std::invalid_argument("levels do not cover the global depth range");
  }
}

std::vector<int> levels_for_depth(double z, const StratConfig& config) {
  std::vector<int> indices;
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (depth_in_level(z, config, i)) indices.push_back(static_cast<int>(i));
  }
  return indices;
}

double depth_from_2d_width(double w2d, const Size3D& size, const CameraCalib& calib) {
  if (w2d <= 0.0) throw std::domain_error("2D width must be positive");
  return calib.fu * size.w / w2d + size.l / 2.0;
}

double depth_from_2d_height(double h2d, const Size3D& size, const CameraCalib& calib) {
  if (h2d <= 0.0) throw std::domain_error("2D height must be positive");
  return calib.fv * size.h / h2d + size.l / 2.0;
}

FitCurve fit_curve_points(std::span<const LabeledFrame> frames, int curve_samples) {
  if (curve_samples < 1) throw std::invalid_argument("need at least one curve sample");
  FitCurve fit;
  double sum_h3d = 0.0;
  double sum_l3d = 0.0;
  double sum_fv = 0.0;
  int frames_used = 0;
  for (const LabeledFrame& frame : frames) {
    bool frame_used = false;
    for (const GroundTruthObject& object : frame.objects) {
      if (object.class_name == "DontCare") continue;
      const double h2d = object.bbox.height();
      if (h2d <= 0.0 || object.center.z <= 0.0) continue;
      fit.scatter.push_back(FitPoint{h2d, object.center.z});
      sum_h3d += object.size.h;
      sum_l3d += object.size.l;
      frame_used = true;
    }
    if (frame_used) {
      sum_fv += frame.calib.fv;
      ++frames_used;
    }
  }
  if (fit.scatter.empty()) throw std::invalid_argument("no usable labels for the fit");
  const double n = static_cast<double>(fit.scatter.size());
  fit.mean_h3d = sum_h3d / n;
  fit.mean_l3d = sum_l3d / n;
  fit.mean_fv = sum_fv / frames_used;

  auto [lo_it, hi_it] = std::minmax_element(
      fit.scatter.begin(), fit.scatter.end(),
      [](const FitPoint& a, const FitPoint& b) { return a.h2d < b.h2d; });
  const double h_lo = lo_it->h2d;
  const double h_hi = hi_it->h2d;
  const Size3D mean_size{fit.mean_h3d, 0.0, fit.mean_l3d};
  const CameraCalib mean_calib = CameraCalib::from_intrinsics(fit.mean_fv, fit.mean_fv, 0, 0);
  const int samples = (h_hi > h_lo) ? curve_samples : 1;
  for (int i = 0; i < samples; ++i) {
    const double t = samples == 1 ? 0.0 : static_cast<double>(i) / (samples - 1);
    const double h = h_lo + t * (h_hi - h_lo);
    fit.curve.push_back(FitPoint{h, depth_from_2d_height(h, mean_size, mean_calib)});
  }
  return fit;
}

LabelGrid assign_targets(std::span<const GroundTruthObject> objects,
                         const StratConfig& config, int level_index, int image_width,
                         int image_height) {
  if (level_index < 0 || static_cast<std::size_t>(level_index) >= config.levels.size()) {
    throw std::invalid_argument("level index out of range");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw std::invalid_argument("image dimensions must be positive");
  }
  const StratLevel& level = config.levels[static_cast<std::size_t>(level_index)];
  const int stride = level.stride;

  LabelGrid grid;
  grid.width = (image_width + stride - 1) / stride;
  grid.height = (image_height + stride - 1) / stride;
  grid.cells.assign(static_cast<std::size_t>(grid.width) * grid.height, PixelLabel{});

  for (std::size_t i = 0; i < objects.size(); ++i) {
    const GroundTruthObject& object = objects[i];
    const Rect2D& box = object.bbox;
    if (box.width() <= 0.0 || box.height() <= 0.0) continue;
    // Cell centers are at ((g + 0.5) * stride); bbox bounds are inclusive.
    const int gx_lo = std::max(0, static_cast<int>(std::ceil(box.left / stride - 0.5)));
    const int gx_hi =
        std::min(grid.width - 1, static_cast<int>(std::floor(box.right / stride - 0.5)));
    const int gy_lo = std::max(0, static_cast<int>(std::ceil(box.top / stride - 0.5)));
    const int gy_hi =
        std::min(grid.height - 1, static_cast<int>(std::floor(box.bottom / stride - 0.5)));
    const bool in_range =
        depth_in_level(object.center.z, config, static_cast<std::size_t>(level_index));

    for (int gy = gy_lo; gy <= gy_hi; ++gy) {
      for (int gx = gx_lo; gx <= gx_hi; ++gx) {
        PixelLabel& cell = grid.at(gx, gy);
        if (!in_range) {
          if (cell.kind == PixelLabelKind::Negative) cell.kind = PixelLabelKind::Ignore;
          continue;
        }
        if (cell.kind != PixelLabelKind::Positive ||
            object.center.z <
                objects[static_cast<std::size_t>(cell.object_index)].center.z) {
          cell.kind = PixelLabelKind::Positive;
          cell.object_index = static_cast<int>(i);
        }
      }
    }
  }
  return grid;
}

}  // namespace mono3d
