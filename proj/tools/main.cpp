// Command-line front end for the mono3d library: KITTI-style evaluation,
// detection post-processing, stratification statistics, depth-error reports
// and angle-loss landscape dumps. All numeric output uses 6 decimal places
// and every run is deterministic for fixed inputs and flags.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mono3d/codec.hpp"
#include "mono3d/eval.hpp"
#include "mono3d/geometry.hpp"
#include "mono3d/kitti.hpp"
#include "mono3d/losses.hpp"
#include "mono3d/nms.hpp"
#include "mono3d/stratify.hpp"

namespace fs = std::filesystem;
using namespace mono3d;

namespace {

std::string fmt6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Regular files of a directory keyed by filename stem. std::map keeps the
// stems sorted, which fixes the processing order.
std::map<std::string, fs::path> index_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("no such directory: " + dir.string());
  }
  std::map<std::string, fs::path> index;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) index[entry.path().stem().string()] = entry.path();
  }
  return index;
}

template <typename Parser>
auto parse_with_context(const fs::path& path, Parser&& parser) {
  try {
    return parser(read_file(path));
  } catch (const ParseError& error) {
    throw std::runtime_error(path.string() + ": " + error.what());
  }
}

// Ground truth and detections paired by filename stem. A ground-truth frame
// without a detection file is evaluated with no detections; a detection file
// without ground truth is skipped. Both sides warn.
std::vector<Frame> load_eval_frames(const fs::path& gt_dir, const fs::path& det_dir) {
  const auto gt_index = index_dir(gt_dir);
  const auto det_index = index_dir(det_dir);
  std::vector<Frame> frames;
  for (const auto& [stem, gt_path] : gt_index) {
    Frame frame;
    frame.gts = parse_with_context(gt_path, parse_label_file);
    const auto det_it = det_index.find(stem);
    if (det_it == det_index.end()) {
      std::cerr << "warning: no detection file for frame " << stem << "\n";
    } else {
      frame.dets = parse_with_context(det_it->second, parse_detection_file);
    }
    frames.push_back(std::move(frame));
  }
  for (const auto& [stem, det_path] : det_index) {
    if (!gt_index.count(stem)) {
      std::cerr << "warning: no ground-truth file for frame " << stem << "; skipped\n";
    }
  }
  return frames;
}

struct EvalConfig {
  std::string gt_dir;
  std::string det_dir;
  std::string class_name = "Car";
  double iou = 0.7;
  std::string mode = "bev";
  int interp = 40;
  std::string csv_path;
};

int run_eval(const EvalConfig& config) {
  const std::vector<Frame> frames = load_eval_frames(config.gt_dir, config.det_dir);
  const IouMode mode = config.mode == "3d" ? IouMode::Box3D : IouMode::Bev;
  const PrInterp interp = config.interp == 11 ? PrInterp::Points11 : PrInterp::Points40;

  std::string table = "class " + config.class_name + " | iou " + fmt6(config.iou) +
                      " | mode " + config.mode + " | interp " +
                      std::to_string(config.interp) + "\n";
  std::string csv = "difficulty,ap_percent,num_gt\n";
  for (DifficultyLevel difficulty :
       {DifficultyLevel::Easy, DifficultyLevel::Moderate, DifficultyLevel::Hard}) {
    const ApResult result =
        evaluate_ap(frames, config.class_name, difficulty, config.iou, mode, interp);
    const std::string ap = result.has_data ? fmt6(100.0 * result.ap) : "n/a";
    table += std::string(to_string(difficulty)) + " " + ap + " " +
             std::to_string(result.num_gt) + "\n";
    csv += std::string(to_string(difficulty)) + "," + (result.has_data ? ap : "") + "," +
           std::to_string(result.num_gt) + "\n";
  }
  std::cout << table;
  if (config.csv_path.empty()) {
    std::cout << "\n" << csv;
  } else {
    write_file(config.csv_path, csv);
  }
  return 0;
}

struct NmsConfig {
  std::string in_path;
  std::string out_path;
  double sigma = 0.9;
  double gamma = 20.0;
  double score_floor = 0.01;
  std::size_t top_k = 0;
};

void nms_one_file(const fs::path& in, const fs::path& out, const NmsParams& params) {
  const std::vector<Detection> detections =
      parse_with_context(in, parse_detection_file);
  write_file(out, write_detection_file(nms_pipeline(detections, params)));
}

int run_nms(const NmsConfig& config) {
  NmsParams params;
  params.sigma = config.sigma;
  params.gamma = config.gamma;
  params.score_floor = config.score_floor;
  params.top_k = config.top_k;
  validate_params(params);

  const fs::path in(config.in_path);
  fs::path out(config.out_path);
  if (fs::is_directory(in)) {
    fs::create_directories(out);
    if (!fs::is_directory(out)) {
      throw std::runtime_error("not a directory: " + out.string());
    }
    for (const auto& [stem, path] : index_dir(in)) {
      nms_one_file(path, out / path.filename(), params);
    }
    return 0;
  }
  if (!fs::is_regular_file(in)) {
    throw std::runtime_error("no such file: " + in.string());
  }
  if (fs::is_directory(out)) out /= in.filename();
  nms_one_file(in, out, params);
  return 0;
}

struct StratifyConfig {
  std::string gt_dir;
  std::string calib_dir;
  std::string class_name = "Car";
  std::string csv_path;
};

int run_stratify(const StratifyConfig& config) {
  const auto gt_index = index_dir(config.gt_dir);
  const auto calib_index = index_dir(config.calib_dir);
  std::vector<LabeledFrame> frames;
  for (const auto& [stem, gt_path] : gt_index) {
    const auto calib_it = calib_index.find(stem);
    if (calib_it == calib_index.end()) {
      std::cerr << "warning: no calibration file for frame " << stem << "; skipped\n";
      continue;
    }
    LabeledFrame frame;
    frame.calib = parse_with_context(calib_it->second, parse_calib_file);
    for (GroundTruthObject& object : parse_with_context(gt_path, parse_label_file)) {
      if (object.class_name == config.class_name) frame.objects.push_back(std::move(object));
    }
    frames.push_back(std::move(frame));
  }
  for (const auto& [stem, path] : calib_index) {
    if (!gt_index.count(stem)) {
      std::cerr << "warning: no label file for frame " << stem << "; skipped\n";
    }
  }

  const StratConfig strata = default_strat_config();
  std::vector<int> level_counts(strata.levels.size(), 0);
  int outside = 0;
  int total = 0;
  for (const LabeledFrame& frame : frames) {
    for (const GroundTruthObject& object : frame.objects) {
      ++total;
      const std::vector<int> levels = levels_for_depth(object.center.z, strata);
      if (levels.empty()) {
        ++outside;
        continue;
      }
      for (int level : levels) ++level_counts[static_cast<std::size_t>(level)];
    }
  }

  std::string report = "objects of class " + config.class_name + ": " +
                       std::to_string(total) + "\n";
  for (std::size_t i = 0; i < strata.levels.size(); ++i) {
    const StratLevel& level = strata.levels[i];
    const bool last = i + 1 == strata.levels.size();
    report += "level " + std::to_string(i) + " (stride " + std::to_string(level.stride) +
              ", depth [" + fmt6(level.z_min) + ", " + fmt6(level.z_max) +
              (last ? "]" : ")") + "): " + std::to_string(level_counts[i]) + "\n";
  }
  report += "outside [" + fmt6(strata.z_lo) + ", " + fmt6(strata.z_hi) + "]: " +
            std::to_string(outside) + "\n";

  const FitCurve fit = fit_curve_points(frames);
  report += "mean 3d height " + fmt6(fit.mean_h3d) + " | mean 3d length " +
            fmt6(fit.mean_l3d) + " | mean focal " + fmt6(fit.mean_fv) + "\n";
  std::cout << report;

  std::string csv = "kind,h2d,z3d\n";
  for (const FitPoint& point : fit.scatter) {
    csv += "scatter," + fmt6(point.h2d) + "," + fmt6(point.z3d) + "\n";
  }
  for (const FitPoint& point : fit.curve) {
    csv += "curve," + fmt6(point.h2d) + "," + fmt6(point.z3d) + "\n";
  }
  if (config.csv_path.empty()) {
    std::cout << "\n" << csv;
  } else {
    write_file(config.csv_path, csv);
  }
  return 0;
}

struct DepthErrorConfig {
  std::string gt_dir;
  std::string det_dir;
  double iou = 0.1;
  std::string class_name;  // empty = all classes
};

int run_depth_error(const DepthErrorConfig& config) {
  const std::vector<Frame> frames = load_eval_frames(config.gt_dir, config.det_dir);
  const DepthErrorReport report = depth_error_report(frames, config.iou, config.class_name);
  std::string csv = "z_lo,z_hi,count,mean_abs_error\n";
  for (const DepthErrorBin& bin : report.bins) {
    csv += fmt6(bin.z_lo) + "," + fmt6(bin.z_hi) + "," + std::to_string(bin.count) + "," +
           fmt6(bin.mean_abs_error) + "\n";
  }
  csv += "# matched " + std::to_string(report.matched) + "\n";
  csv += "# unmatched " + std::to_string(report.unmatched) + "\n";
  std::cout << csv;
  return 0;
}

struct LandscapeConfig {
  std::string out_path;
  int samples = 181;
  double angle_deg = 45.0;
};

int run_loss_landscape(const LandscapeConfig& config) {
  if (config.samples < 2) throw std::runtime_error("need at least 2 samples");
  const double beta = config.angle_deg * kPi / 180.0;
  const ObservationAngle truth = fold_observation_angle(beta);

  std::string csv = "offset_deg,bev_iou,squared_loss,sine_loss,split_loss\n";
  for (int i = 0; i < config.samples; ++i) {
    const double offset_deg =
        -180.0 + 360.0 * static_cast<double>(i) / (config.samples - 1);
    const double offset = offset_deg * kPi / 180.0;
    const ObservationAngle predicted = fold_observation_angle(beta + offset);

    // Two equal car-sized footprints on the camera axis differing only by the
    // yaw offset; at a half-turn they coincide again.
    const BevPolygon truth_box = bev_rect(0.0, 20.0, 1.6, 4.0, beta);
    const BevPolygon offset_box = bev_rect(0.0, 20.0, 1.6, 4.0, beta + offset);

    csv += fmt6(offset_deg) + "," + fmt6(bev_iou(truth_box, offset_box)) + "," +
           fmt6(angle_loss_naive(beta, beta + offset).value) + "," +
           fmt6(angle_loss_second(beta, beta + offset).value) + "," +
           fmt6(angle_loss_mds(truth.theta, predicted.theta,
                               static_cast<double>(truth.heading),
                               static_cast<double>(predicted.heading))
                    .value) +
           "\n";
  }
  if (config.out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(config.out_path, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monocular 3D detection toolkit"};
  app.require_subcommand(1);

  EvalConfig eval_config;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "KITTI-protocol average precision per difficulty. Prints a text "
              "table; --csv writes columns difficulty,ap_percent,num_gt "
              "(ap_percent empty when a difficulty has no counted ground truth).");
  eval_cmd->add_option("--gt-dir", eval_config.gt_dir, "directory of label files")
      ->required();
  eval_cmd->add_option("--det-dir", eval_config.det_dir, "directory of detection files")
      ->required();
  eval_cmd->add_option("--class", eval_config.class_name, "class to evaluate (default Car)");
  eval_cmd->add_option("--iou", eval_config.iou, "IoU match threshold (default 0.7)");
  eval_cmd->add_option("--mode", eval_config.mode, "overlap mode (default bev)")
      ->check(CLI::IsMember({"bev", "3d"}));
  eval_cmd->add_option("--interp", eval_config.interp,
                       "recall interpolation points (default 40)")
      ->check(CLI::IsMember({40, 11}));
  eval_cmd->add_option("--csv", eval_config.csv_path,
                       "write the CSV to this file instead of stdout");

  NmsConfig nms_config;
  CLI::App* nms_cmd = app.add_subcommand(
      "nms", "Soft suppression + density rescoring of detection files. --in/--out "
             "may both be files or both directories.");
  nms_cmd->add_option("--in", nms_config.in_path, "detection file or directory")->required();
  nms_cmd->add_option("--out", nms_config.out_path, "output file or directory")->required();
  nms_cmd->add_option("--sigma", nms_config.sigma, "suppression decay width (default 0.9)");
  nms_cmd->add_option("--gamma", nms_config.gamma, "density activation scale (default 20)");
  nms_cmd->add_option("--score-floor", nms_config.score_floor,
                      "drop boxes below this score (default 0.01)");
  nms_cmd->add_option("--top-k", nms_config.top_k, "keep at most this many (0 = all)");

  StratifyConfig stratify_config;
  CLI::App* stratify_cmd = app.add_subcommand(
      "stratify", "Depth-stratification histogram and the size-vs-depth fit. "
                  "--out-csv writes columns kind,h2d,z3d with kind in "
                  "{scatter, curve}.");
  stratify_cmd->add_option("--gt-dir", stratify_config.gt_dir, "directory of label files")
      ->required();
  stratify_cmd
      ->add_option("--calib-dir", stratify_config.calib_dir,
                   "directory of calibration files")
      ->required();
  stratify_cmd->add_option("--class", stratify_config.class_name,
                           "class to collect (default Car)");
  stratify_cmd->add_option("--out-csv", stratify_config.csv_path,
                           "write the CSV to this file instead of stdout");

  DepthErrorConfig depth_config;
  CLI::App* depth_cmd = app.add_subcommand(
      "depth-error", "Depth-binned absolute error of best-matching detections. "
                     "Prints CSV columns z_lo,z_hi,count,mean_abs_error followed "
                     "by '# matched N' and '# unmatched N' lines.");
  depth_cmd->add_option("--gt-dir", depth_config.gt_dir, "directory of label files")
      ->required();
  depth_cmd->add_option("--det-dir", depth_config.det_dir, "directory of detection files")
      ->required();
  depth_cmd->add_option("--iou", depth_config.iou,
                        "minimum BEV IoU for a match (default 0.1)");
  depth_cmd->add_option("--class", depth_config.class_name,
                        "restrict to one class (default all)");

  LandscapeConfig landscape_config;
  CLI::App* landscape_cmd = app.add_subcommand(
      "loss-landscape", "Angle-loss values over observation-angle offsets. CSV "
                        "columns offset_deg,bev_iou,squared_loss,sine_loss,"
                        "split_loss.");
  landscape_cmd->add_option("--out", landscape_config.out_path,
                            "output file (default stdout)");
  landscape_cmd->add_option("--samples", landscape_config.samples,
                            "offset sample count over [-180, 180] (default 181)");
  landscape_cmd->add_option("--angle-deg", landscape_config.angle_deg,
                            "ground-truth observation angle in degrees (default 45)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) return run_eval(eval_config);
    if (nms_cmd->parsed()) return run_nms(nms_config);
    if (stratify_cmd->parsed()) return run_stratify(stratify_config);
    if (depth_cmd->parsed()) return run_depth_error(depth_config);
    if (landscape_cmd->parsed()) return run_loss_landscape(landscape_config);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
