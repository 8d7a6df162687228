#include "mono3d/kitti.hpp"

#include <charconv>
#include <cstdio>
#include <vector>

namespace mono3d {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos > start) fields.push_back(line.substr(start, pos - start));
  }
  return fields;
}

double parse_number(std::string_view field, int line_number) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(line_number, "invalid number '" + std::string(field) + "'");
  }
  return value;
}

// Fills the 15 label columns shared by ground-truth and detection rows.
void read_object_fields(const std::vector<std::string_view>& fields, int line_number,
                        GroundTruthObject& out) {
  out.class_name = std::string(fields[0]);
  out.truncation = parse_number(fields[1], line_number);
  out.occlusion = static_cast<int>(parse_number(fields[2], line_number));
  out.alpha = parse_number(fields[3], line_number);
  out.bbox.left = parse_number(fields[4], line_number);
  out.bbox.top = parse_number(fields[5], line_number);
  out.bbox.right = parse_number(fields[6], line_number);
  out.bbox.bottom = parse_number(fields[7], line_number);
  out.size.h = parse_number(fields[8], line_number);
  out.size.w = parse_number(fields[9], line_number);
  out.size.l = parse_number(fields[10], line_number);
  out.center.x = parse_number(fields[11], line_number);
  out.center.y = parse_number(fields[12], line_number);
  out.center.z = parse_number(fields[13], line_number);
  out.rotation_y = parse_number(fields[14], line_number);
}

// Calls fn(line, line_number) for every line; strips a trailing '\r'.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line =
        eol == std::string_view::npos ? text.substr(pos) : text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_number;
    fn(line, line_number);
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
}

void append_number(std::string& out, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  out += buf;
}

void append_object_fields(std::string& out, const GroundTruthObject& object) {
  out += object.class_name;
  out += ' ';
  append_number(out, object.truncation);
  out += ' ';
  out += std::to_string(object.occlusion);
  for (double value : {object.alpha, object.bbox.left, object.bbox.top, object.bbox.right,
                       object.bbox.bottom, object.size.h, object.size.w, object.size.l,
                       object.center.x, object.center.y, object.center.z,
                       object.rotation_y}) {
    out += ' ';
    append_number(out, value);
  }
}

}  // namespace

CameraCalib CameraCalib::from_intrinsics(double fu, double fv, double cu, double cv) {
  CameraCalib calib;
  calib.fu = fu;
  calib.fv = fv;
  calib.cu = cu;
  calib.cv = cv;
  calib.p2 = {fu, 0.0, cu, 0.0, 0.0, fv, cv, 0.0, 0.0, 0.0, 1.0, 0.0};
  return calib;
}

std::vector<GroundTruthObject> parse_label_file(std::string_view text) {
  std::vector<GroundTruthObject> objects;
  for_each_line(text, [&](std::string_view line, int line_number) {
    auto fields = split_fields(line);
    if (fields.empty()) return;
    if (fields.size() != 15) {
      throw ParseError(line_number, "expected 15 columns, got " +
                                        std::to_string(fields.size()));
    }
    GroundTruthObject object;
    read_object_fields(fields, line_number, object);
    objects.push_back(std::move(object));
  });
  return objects;
}

std::vector<Detection> parse_detection_file(std::string_view text) {
  std::vector<Detection> detections;
  for_each_line(text, [&](std::string_view line, int line_number) {
    auto fields = split_fields(line);
    if (fields.empty()) return;
    if (fields.size() != 16) {
      throw ParseError(line_number, "expected 16 columns, got " +
                                        std::to_string(fields.size()));
    }
    Detection detection;
    read_object_fields(fields, line_number, detection);
    detection.score = parse_number(fields[15], line_number);
    detections.push_back(std::move(detection));
  });
  return detections;
}

CameraCalib parse_calib_file(std::string_view text) {
  CameraCalib calib;
  bool found = false;
  for_each_line(text, [&](std::string_view line, int line_number) {
    if (found) return;
    auto fields = split_fields(line);
    if (fields.empty() || fields[0] != "P2:") return;
    if (fields.size() != 13) {
      throw ParseError(line_number,
                       "P2 row needs 12 values, got " + std::to_string(fields.size() - 1));
    }
    for (int i = 0; i < 12; ++i) {
      calib.p2[static_cast<std::size_t>(i)] = parse_number(fields[1 + i], line_number);
    }
    calib.fu = calib.p2[0];
    calib.cu = calib.p2[2];
    calib.fv = calib.p2[5];
    calib.cv = calib.p2[6];
    found = true;
  });
  if (!found) throw ParseError(0, "no P2 row in calibration text");
  return calib;
}

std::string write_label_file(const std::vector<GroundTruthObject>& objects) {
  std::string out;
  for (const GroundTruthObject& object : objects) {
    append_object_fields(out, object);
    out += '\n';
  }
  return out;
}

std::string write_detection_file(const std::vector<Detection>& detections) {
  std::string out;
  for (const Detection& detection : detections) {
    append_object_fields(out, detection);
    out += ' ';
    append_number(out, detection.score);
    out += '\n';
  }
  return out;
}

std::string write_calib_file(const CameraCalib& calib) {
  std::string out = "P2:";
  for (double value : calib.p2) {
    out += ' ';
    append_number(out, value);
  }
  out += '\n';
  return out;
}

}  // namespace mono3d
