#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>

#include "objmap/core/rng.hpp"
#include "objmap/geom/chamfer.hpp"
#include "objmap/geom/obb.hpp"

using namespace objmap;
using namespace objmap::geom;

namespace {

Mat3 rotation_zyx(double a, double b, double c) {
  return (Eigen::AngleAxisd(a, Vec3::UnitZ()) * Eigen::AngleAxisd(b, Vec3::UnitY()) *
          Eigen::AngleAxisd(c, Vec3::UnitX()))
      .toRotationMatrix();
}

PointCloud3 random_cloud(std::size_t n, Rng& rng, const Vec3& scale = Vec3(1, 0.6, 0.3)) {
  PointCloud3 c;
  c.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    c.points.emplace_back(rng.uniform(-1, 1) * scale.x(), rng.uniform(-1, 1) * scale.y(),
                          rng.uniform(-1, 1) * scale.z());
  return c;
}

}  // namespace

TEST_CASE("rigid pose composition and inverse") {
  Rng rng(7);
  RigidPose p{rotation_zyx(0.3, -0.8, 1.2), Vec3(0.1, -2.0, 0.5)};
  RigidPose q{rotation_zyx(-1.1, 0.2, 0.4), Vec3(1.0, 0.0, -0.3)};
  CHECK(p.is_proper());

  Vec3 x(0.3, 0.7, -0.2);
  CHECK(((p * q).apply(x) - p.apply(q.apply(x))).norm() < 1e-12);

  RigidPose id = p * p.inverse();
  CHECK((id.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(id.translation.norm() < 1e-9);
}

TEST_CASE("fit_obb on unit cube corners") {
  PointCloud3 cube;
  for (int x = 0; x <= 1; ++x)
    for (int y = 0; y <= 1; ++y)
      for (int z = 0; z <= 1; ++z) cube.points.emplace_back(x, y, z);

  OrientedBox box = fit_obb(cube);
  CHECK(box.valid());
  CHECK((box.center - Vec3(0.5, 0.5, 0.5)).norm() < 1e-9);
  for (int k = 0; k < 3; ++k) CHECK(box.half_extents[k] == doctest::Approx(0.5).epsilon(1e-9));
  for (const Vec3& p : cube.points) CHECK(box.contains(p, 1e-9));
  CHECK(box.contains(box.center));
}

TEST_CASE("fit_obb axes rotate with the cloud") {
  Rng rng(11);
  PointCloud3 cloud = random_cloud(200, rng);
  OrientedBox base = fit_obb(cloud);

  const Mat3 R = rotation_zyx(0.9, 0.4, -0.7);
  RigidPose pose{R, Vec3(0.2, 0.1, -0.8)};
  OrientedBox rotated = fit_obb(cloud.transformed(pose));

  // columns must match R * base.axes up to sign and permutation
  for (int i = 0; i < 3; ++i) {
    const Vec3 want = R * base.axes.col(i);
    double best = 0.0;
    for (int j = 0; j < 3; ++j) best = std::max(best, std::abs(want.dot(rotated.axes.col(j))));
    CHECK(best == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(rotated.half_extents.maxCoeff() ==
        doctest::Approx(base.half_extents.maxCoeff()).epsilon(1e-9));
}

TEST_CASE("fit_obb clamps coplanar point sets") {
  PointCloud3 plane;
  plane.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}};
  OrientedBox box = fit_obb(plane);
  CHECK(box.half_extents.minCoeff() == doctest::Approx(1e-6));
  for (const Vec3& p : plane.points) CHECK(box.contains(p, 1e-7));
}

TEST_CASE("fit_obb rejects rank-deficient input") {
  PointCloud3 line;
  line.points = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};
  CHECK_THROWS_AS(fit_obb(line), DegenerateCloudError);
  PointCloud3 tiny;
  tiny.points = {{0, 0, 0}, {1, 1, 1}};
  CHECK_THROWS_AS(fit_obb(tiny), DegenerateCloudError);
}

TEST_CASE("fit_obb is at least as large as the tight bounds in its own frame") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    PointCloud3 cloud = random_cloud(120, rng);
    OrientedBox box = fit_obb(cloud);
    Vec3 lo = Vec3::Constant(1e300), hi = -lo;
    for (const Vec3& p : cloud.points) {
      Vec3 q = box.to_local(p);
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    const Vec3 tight = 0.5 * (hi - lo);
    CHECK(box.volume() >= 8.0 * tight.x() * tight.y() * tight.z() - 1e-12);
  }
}

TEST_CASE("world_to_nocs basics") {
  Rng rng(3);
  OrientedBox box;
  box.center = Vec3(0.5, -1.0, 2.0);
  box.axes = rotation_zyx(0.2, 0.4, -0.3);
  box.half_extents = Vec3(0.4, 0.2, 0.1);

  CHECK(world_to_nocs(box.center, box).norm() < 1e-12);

  const Vec3 corner = box.center + box.axes * box.half_extents;
  CHECK((world_to_nocs(corner, box) - Vec3(1, 1, 1)).norm() < 1e-9);

  for (int i = 0; i < 50; ++i) {
    Vec3 p(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    CHECK((nocs_to_world(world_to_nocs(p, box), box) - p).norm() < 1e-9);
  }
}

TEST_CASE("unidirectional chamfer examples") {
  PointCloud3 P, Q;
  P.points = {{0, 0, 0}};
  Q.points = {{1, 0, 0}, {0, 1, 0}};
  CHECK(unidirectional_chamfer(P, Q) == doctest::Approx(1.0));

  Rng rng(41);
  PointCloud3 same = random_cloud(60, rng);
  CHECK(unidirectional_chamfer(same, same) == doctest::Approx(0.0));

  // pairwise separation > 0.7 guarantees each point's nearest shifted
  // neighbor is its own copy at exactly 0.3
  PointCloud3 src;
  while (src.count() < 100) {
    Vec3 cand(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(-6, 6));
    bool ok = true;
    for (const Vec3& p : src.points)
      if ((p - cand).norm() <= 0.7) {
        ok = false;
        break;
      }
    if (ok) src.points.push_back(cand);
  }
  PointCloud3 dst;
  for (const Vec3& p : src.points) dst.points.push_back(p + Vec3(0.3, 0, 0));
  // brute-force oracle over all pairs
  double oracle = 0.0;
  for (const Vec3& p : src.points) {
    double best = 1e300;
    for (const Vec3& q : dst.points) best = std::min(best, (p - q).norm());
    oracle += best;
  }
  oracle /= static_cast<double>(src.count());
  CHECK(unidirectional_chamfer(src, dst) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(unidirectional_chamfer(src, dst) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("chamfer empty cloud is an error") {
  PointCloud3 P, empty;
  P.points = {{0, 0, 0}};
  CHECK_THROWS_AS(unidirectional_chamfer(P, empty), DegenerateCloudError);
  CHECK_THROWS_AS(unidirectional_chamfer(empty, P), DegenerateCloudError);
}

TEST_CASE("chamfer invariants: nonnegative, rigid invariant, zero iff coincident") {
  Rng rng(5);
  PointCloud3 P = random_cloud(80, rng);
  PointCloud3 Q = random_cloud(90, rng);
  const double base = unidirectional_chamfer(P, Q);
  CHECK(base >= 0.0);

  RigidPose pose{rotation_zyx(1.0, -0.2, 0.5), Vec3(3, -1, 2)};
  const double moved = unidirectional_chamfer(P.transformed(pose), Q.transformed(pose));
  CHECK(moved == doctest::Approx(base).epsilon(1e-9));

  // zero iff every P point coincides with some Q point
  PointCloud3 sub;
  sub.points = {Q.points[3], Q.points[10], Q.points[42]};
  CHECK(unidirectional_chamfer(sub, Q) == doctest::Approx(0.0));
  sub.points.push_back(Q.points[0] + Vec3(0.05, 0, 0));
  CHECK(unidirectional_chamfer(sub, Q) > 0.0);
}

TEST_CASE("grid nearest neighbor agrees with brute force") {
  Rng rng(17);
  PointCloud3 cloud = random_cloud(800, rng);
  PointGrid grid(cloud.points);
  for (int i = 0; i < 300; ++i) {
    Vec3 q(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2));
    NearestHit a = nearest_brute(q, cloud.points);
    NearestHit b = grid.nearest(q);
    CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-12));
  }
  // far-away query still resolves
  NearestHit far = grid.nearest(Vec3(50, 50, 50));
  CHECK(far.distance == doctest::Approx(nearest_brute(Vec3(50, 50, 50), cloud.points).distance));
}

TEST_CASE("voxel downsample keeps points on the original set") {
  Rng rng(29);
  PointCloud3 cloud = random_cloud(500, rng);
  PointCloud3 down = voxel_downsample(cloud, 0.05);
  CHECK(down.count() > 0);
  CHECK(down.count() <= cloud.count());
  for (const Vec3& p : down.points) {
    CHECK(nearest_brute(p, cloud.points).distance == doctest::Approx(0.0));
  }
}

TEST_CASE("ply round trip") {
  Rng rng(31);
  PointCloud3 cloud = random_cloud(64, rng);
  const std::string path = "test_cloud.ply";
  save_ply(cloud, path);
  PointCloud3 back = load_ply(path);
  REQUIRE(back.count() == cloud.count());
  for (std::size_t i = 0; i < cloud.count(); ++i)
    CHECK((back.points[i] - cloud.points[i]).norm() == doctest::Approx(0.0));
  std::remove(path.c_str());
}

TEST_CASE("largest_dimension is rotation invariant") {
  Rng rng(37);
  PointCloud3 cloud = random_cloud(150, rng);
  const double a = cloud.largest_dimension();
  RigidPose pose{rotation_zyx(0.7, 1.1, -0.4), Vec3(5, 5, 5)};
  const double b = cloud.transformed(pose).largest_dimension();
  CHECK(a == doctest::Approx(b).epsilon(1e-9));
  CHECK(a > 0.0);
}
