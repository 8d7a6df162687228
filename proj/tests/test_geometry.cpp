#include <doctest.h>

#include <cmath>
#include <random>

#include "mono3d/geometry.hpp"
#include "support.hpp"

using namespace mono3d;

namespace {

// True when each vertex of a has a vertex of b within tol (corner sets match
// regardless of ordering).
bool same_corner_set(const BevPolygon& a, const BevPolygon& b, double tol = 1e-9) {
  for (const BevPoint& pa : a.v) {
    double best = 1e300;
    for (const BevPoint& pb : b.v) {
      best = std::min(best, std::hypot(pa.x - pb.x, pa.z - pb.z));
    }
    if (best > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("wrap_to_pi lands in the half-open interval") {
  CHECK(wrap_to_pi(0.0) == doctest::Approx(0.0));
  CHECK(wrap_to_pi(kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_to_pi(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(wrap_to_pi(-kPi / 2.0) == doctest::Approx(-kPi / 2.0));
  auto rng = testsup::make_rng(11);
  std::uniform_real_distribution<double> uangle(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = uangle(rng);
    const double w = wrap_to_pi(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::remainder(a - w, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("project maps the principal ray to the principal point") {
  const CameraCalib calib = CameraCalib::from_intrinsics(700.0, 700.0, 600.0, 180.0);
  for (double z : {0.5, 1.0, 10.0, 75.0}) {
    const PixelPoint pixel = project(Vec3{0.0, 0.0, z}, calib);
    CHECK(pixel.u == doctest::Approx(600.0).epsilon(1e-12));
    CHECK(pixel.v == doctest::Approx(180.0).epsilon(1e-12));
  }
}

TEST_CASE("project evaluates the pinhole model") {
  const CameraCalib calib = CameraCalib::from_intrinsics(721.5377, 721.5377, 609.5593, 172.854);
  const PixelPoint pixel = project(Vec3{1.0, 0.0, 1.0}, calib);
  CHECK(pixel.u == doctest::Approx(1331.0970).epsilon(1e-9));
}

TEST_CASE("project rejects points at or behind the image plane") {
  const CameraCalib calib = CameraCalib::from_intrinsics(700.0, 700.0, 600.0, 180.0);
  CHECK_THROWS_AS(project(Vec3{0.0, 0.0, -1.0}, calib), std::domain_error);
  CHECK_THROWS_AS(project(Vec3{0.0, 0.0, 0.0}, calib), std::domain_error);
  CHECK_THROWS_AS(back_project(PixelPoint{600.0, 180.0}, 0.0, calib), std::domain_error);
  CHECK_THROWS_AS(back_project(PixelPoint{600.0, 180.0}, -3.0, calib), std::domain_error);
}

TEST_CASE("back_project inverts project") {
  const CameraCalib calib = CameraCalib::from_intrinsics(721.5377, 719.0, 609.5593, 172.854);
  const Vec3 origin_ray = back_project(PixelPoint{609.5593, 172.854}, 10.0, calib);
  CHECK(origin_ray.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(origin_ray.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(origin_ray.z == doctest::Approx(10.0));

  auto rng = testsup::make_rng(23);
  std::uniform_real_distribution<double> ux(-30.0, 30.0), uy(-5.0, 5.0), uz(1.0, 100.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p{ux(rng), uy(rng), uz(rng)};
    const Vec3 q = back_project(project(p, calib), p.z, calib);
    CHECK(std::abs(q.x - p.x) < 1e-9);
    CHECK(std::abs(q.y - p.y) < 1e-9);
    CHECK(std::abs(q.z - p.z) < 1e-9);
  }
}

TEST_CASE("observation angle splits into heading and magnitude") {
  const ObservationAngle on_ray = beta_from_rotation_y(std::atan2(3.0, 10.0), Vec3{3.0, 1.0, 10.0});
  CHECK(on_ray.beta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(on_ray.theta == doctest::Approx(0.0).epsilon(1e-12));

  const ObservationAngle quarter = ObservationAngle::from_beta(kPi / 4.0);
  CHECK(quarter.heading == 1);
  CHECK(quarter.theta == doctest::Approx(kPi / 4.0));

  const ObservationAngle negative = ObservationAngle::from_beta(-kPi / 3.0);
  CHECK(negative.heading == 0);
  CHECK(negative.theta == doctest::Approx(kPi / 3.0));
}

TEST_CASE("folding maps a three-quarter turn to the opposite quarter") {
  // Raw angle 3*pi/4 exceeds the fold range; it comes back as -pi/4 with the
  // heading flipped.
  const Vec3 center{0.0, 1.0, 10.0};
  const ObservationAngle folded = beta_from_rotation_y(3.0 * kPi / 4.0, center);
  CHECK(folded.beta == doctest::Approx(-kPi / 4.0));
  CHECK(folded.heading == 0);
  CHECK(folded.theta == doctest::Approx(kPi / 4.0));
}

TEST_CASE("folding boundary lands on the positive half") {
  CHECK(fold_observation_angle(kPi / 2.0).beta == doctest::Approx(kPi / 2.0));
  CHECK(fold_observation_angle(-kPi / 2.0).beta == doctest::Approx(kPi / 2.0));
  CHECK(fold_observation_angle(kPi).beta == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fold_observation_angle(-3.0 * kPi / 4.0).beta == doctest::Approx(kPi / 4.0));
  auto rng = testsup::make_rng(31);
  std::uniform_real_distribution<double> uangle(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const ObservationAngle angle = fold_observation_angle(uangle(rng));
    CHECK(angle.beta > -kPi / 2.0);
    CHECK(angle.beta <= kPi / 2.0);
    CHECK(angle.theta == doctest::Approx(std::abs(angle.beta)));
    CHECK(angle.heading == (angle.beta >= 0.0 ? 1 : 0));
  }
}

TEST_CASE("folding preserves the footprint corner set") {
  // The fold changes the yaw by 0 or pi; a rectangle is symmetric under a
  // half turn, so the corners must coincide. Brute-forced over an angle and
  // position grid.
  const Size3D size{1.5, 1.8, 4.2};
  for (int yi = 0; yi <= 40; ++yi) {
    const double yaw = -kPi + 2.0 * kPi * yi / 40.0;
    for (int xi = -2; xi <= 2; ++xi) {
      const Vec3 center{5.0 * xi, 1.0, 14.0};
      const ObservationAngle folded = beta_from_rotation_y(yaw, center);
      const BevPolygon direct = bev_rect(center.x, center.z, size.w, size.l, yaw);
      const BevPolygon via_fold = box_corners_bev(center, size, folded);
      CHECK(same_corner_set(direct, via_fold));
    }
  }
}

TEST_CASE("yaw recovery inverts the observation split") {
  auto rng = testsup::make_rng(37);
  std::uniform_real_distribution<double> uyaw(-kPi, kPi), ux(-20.0, 20.0), uz(2.0, 70.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 center{ux(rng), 1.5, uz(rng)};
    const double yaw = uyaw(rng);
    const ObservationAngle folded = beta_from_rotation_y(yaw, center);
    const double recovered = yaw_from_observation(folded, center);
    // Equal up to the half-turn fold.
    const double diff = std::abs(std::remainder(recovered - yaw, kPi));
    CHECK(diff < 1e-9);
  }
}

TEST_CASE("footprint lies axis-aligned at zero yaw") {
  const BevPolygon poly = bev_rect(0.0, 10.0, 2.0, 4.0, 0.0);
  const BevPolygon expected{{BevPoint{1.0, 8.0}, BevPoint{1.0, 12.0}, BevPoint{-1.0, 12.0},
                             BevPoint{-1.0, 8.0}}};
  CHECK(same_corner_set(poly, expected));
}

TEST_CASE("a quarter turn swaps the footprint extents") {
  const BevPolygon poly = bev_rect(0.0, 10.0, 2.0, 4.0, kPi / 2.0);
  const BevPolygon expected{{BevPoint{2.0, 9.0}, BevPoint{2.0, 11.0}, BevPoint{-2.0, 11.0},
                             BevPoint{-2.0, 9.0}}};
  CHECK(same_corner_set(poly, expected));
}

TEST_CASE("box_corners_bev rejects non-positive extents") {
  const ObservationAngle angle = ObservationAngle::from_beta(0.3);
  CHECK_THROWS_AS(box_corners_bev(Vec3{0, 1, 10}, Size3D{1.5, 0.0, 4.0}, angle),
                  std::domain_error);
  CHECK_THROWS_AS(box_corners_bev(Vec3{0, 1, 10}, Size3D{1.5, 1.6, -4.0}, angle),
                  std::domain_error);
}

TEST_CASE("footprints stay counter-clockwise with area width times length") {
  auto rng = testsup::make_rng(41);
  std::uniform_real_distribution<double> ux(-30.0, 30.0), uz(1.0, 80.0), uw(0.3, 4.0),
      ul(0.3, 8.0), uyaw(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double w = uw(rng), l = ul(rng);
    const BevPolygon poly = bev_rect(ux(rng), uz(rng), w, l, uyaw(rng));
    CHECK(polygon_area(poly) == doctest::Approx(w * l).epsilon(1e-9));
  }
}

TEST_CASE("identical footprints have full overlap") {
  const BevPolygon poly = bev_rect(3.0, 20.0, 1.8, 4.4, 0.7);
  CHECK(bev_iou(poly, poly) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(convex_intersection_area(poly, poly) == doctest::Approx(1.8 * 4.4).epsilon(1e-9));
}

TEST_CASE("half-offset unit squares overlap by one third") {
  const BevPolygon a = bev_rect(0.0, 0.0, 1.0, 1.0, 0.0);
  const BevPolygon b = bev_rect(0.5, 0.0, 1.0, 1.0, 0.0);
  CHECK(bev_iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("disjoint and degenerate footprints have zero overlap") {
  const BevPolygon a = bev_rect(0.0, 0.0, 1.0, 1.0, 0.3);
  const BevPolygon b = bev_rect(10.0, 0.0, 1.0, 1.0, -0.8);
  CHECK(bev_iou(a, b) == 0.0);
  const BevPolygon flat = bev_rect(0.0, 0.0, 0.0, 1.0, 0.0);
  CHECK(bev_iou(flat, a) == 0.0);
  CHECK(bev_iou(a, flat) == 0.0);
  CHECK(bev_iou(flat, flat) == 0.0);
}

TEST_CASE("overlap is symmetric and invariant under rigid motion") {
  auto rng = testsup::make_rng(43);
  std::uniform_real_distribution<double> upos(-5.0, 5.0), usize(0.5, 4.0),
      uyaw(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const BevPolygon a = bev_rect(upos(rng), upos(rng), usize(rng), usize(rng), uyaw(rng));
    const BevPolygon b = bev_rect(upos(rng), upos(rng), usize(rng), usize(rng), uyaw(rng));
    const double iou = bev_iou(a, b);
    CHECK(iou == doctest::Approx(bev_iou(b, a)).epsilon(1e-12));
    CHECK(iou >= 0.0);
    CHECK(iou <= 1.0);

    const double phi = uyaw(rng);
    const double tx = upos(rng), tz = upos(rng);
    auto moved = [&](const BevPolygon& poly) {
      BevPolygon out = poly;
      for (BevPoint& p : out.v) {
        const double x = std::cos(phi) * p.x - std::sin(phi) * p.z + tx;
        const double z = std::sin(phi) * p.x + std::cos(phi) * p.z + tz;
        p = BevPoint{x, z};
      }
      return out;
    };
    CHECK(bev_iou(moved(a), moved(b)) == doctest::Approx(iou).epsilon(1e-9));
  }
}

TEST_CASE("overlap matches a point-sampling estimate on random rotated pairs") {
  auto rng = testsup::make_rng(47);
  std::uniform_real_distribution<double> upos(-2.0, 2.0), usize(0.5, 4.0), uyaw(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const BevPolygon a = bev_rect(upos(rng), upos(rng), usize(rng), usize(rng), uyaw(rng));
    const BevPolygon b = bev_rect(upos(rng), upos(rng), usize(rng), usize(rng), uyaw(rng));
    const double exact = bev_iou(a, b);
    const double sampled = testsup::mc_bev_iou(a, b, 1000000, rng);
    CHECK(std::abs(exact - sampled) < 1e-2);
  }
}

TEST_CASE("footprint of a label row follows its global yaw") {
  GroundTruthObject gt = testsup::make_gt("Car", 2.0, 1.4, 15.0, 1.5, 1.7, 4.1, 0.9);
  CHECK(same_corner_set(bev_footprint(gt), bev_rect(2.0, 15.0, 1.7, 4.1, 0.9)));
}

TEST_CASE("axis-aligned rectangle overlap") {
  const Rect2D a{0.0, 0.0, 10.0, 10.0};
  const Rect2D b{5.0, 0.0, 15.0, 10.0};
  CHECK(rect_iou_2d(a, b) == doctest::Approx(50.0 / 150.0).epsilon(1e-12));
  CHECK(rect_iou_2d(a, a) == doctest::Approx(1.0));
  CHECK(rect_iou_2d(a, Rect2D{20.0, 20.0, 30.0, 30.0}) == 0.0);
  CHECK(rect_iou_2d(a, Rect2D{3.0, 3.0, 3.0, 8.0}) == 0.0);
}
