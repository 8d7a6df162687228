#ifndef MONO3D_KITTI_HPP
#define MONO3D_KITTI_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mono3d/types.hpp"

namespace mono3d {

/// Pinhole intrinsics of the left color camera, extracted from the "P2:" row
/// of a KITTI calibration file. The full 3x4 projection row is kept so a
/// parsed file can be re-serialized without loss.
struct CameraCalib {
  double fu = 0.0;  // focal length, pixels
  double fv = 0.0;
  double cu = 0.0;  // principal point, pixels
  double cv = 0.0;
  std::array<double, 12> p2{};  // row-major 3x4 projection matrix

  static CameraCalib from_intrinsics(double fu, double fv, double cu, double cv);
};

/// One row of a KITTI label file. Geometry follows the devkit conventions:
/// `center` is the middle of the bottom face of the 3D box in the camera
/// frame, `alpha` the observation angle, `rotation_y` the global yaw.
struct GroundTruthObject {
  std::string class_name;
  double truncation = 0.0;  // fraction in [0,1]; -1 allowed in result files
  int occlusion = 0;        // 0,1,2 per devkit; 3 = unknown
  double alpha = 0.0;       // observation angle, radians
  Rect2D bbox;
  Size3D size;
  Vec3 center;
  double rotation_y = 0.0;  // radians
};

/// Label row plus a detection score (KITTI result-file format).
struct Detection : GroundTruthObject {
  double score = 0.0;
};

/// Parse failure with the 1-based line it occurred on.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Parses KITTI label text (15 whitespace-separated columns per line).
/// DontCare rows are kept. Throws ParseError on a malformed line.
std::vector<GroundTruthObject> parse_label_file(std::string_view text);

/// Parses KITTI result text (label columns plus a trailing score).
std::vector<Detection> parse_detection_file(std::string_view text);

/// Extracts the "P2:" projection row from KITTI calibration text.
/// Throws ParseError when the row is missing or malformed.
CameraCalib parse_calib_file(std::string_view text);

/// Serializers. Numeric fields are written with 6 decimal places so that a
/// parse of the output reproduces every field within 1e-6 and score ordering
/// survives a round-trip.
std::string write_label_file(const std::vector<GroundTruthObject>& objects);
std::string write_detection_file(const std::vector<Detection>& detections);
std::string write_calib_file(const CameraCalib& calib);

}  // namespace mono3d

#endif  // MONO3D_KITTI_HPP
