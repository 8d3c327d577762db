#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/LU>

#include "support.hpp"
#include "vsysid/camera.hpp"

namespace vsysid {
namespace {

using test::Gen;
using test::kPi;

TEST(CameraProperty, RotationIsOrthonormal) {
  Gen g(31);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Matrix3d r = rotation_matrix(g.uniform(-kPi, kPi), g.uniform(-kPi, kPi));
    EXPECT_LT((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-10);
  }
}

TEST(CameraProperty, RotationDerivativesMatchElementaryRotations) {
  Gen g(32);
  const double h = 1e-6;
  for (int i = 0; i < 50; ++i) {
    const double a = g.uniform(-kPi, kPi);
    const double b = g.uniform(-kPi, kPi);
    const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
    Eigen::Matrix3d rx, ry, drx, dry;
    rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
    ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
    drx << 0, 0, 0, 0, -sa, -ca, 0, ca, -sa;
    dry << -sb, 0, cb, 0, 0, 0, -cb, 0, -sb;
    const Eigen::Matrix3d fd_a = (rotation_matrix(a + h, b) - rotation_matrix(a - h, b)) / (2 * h);
    const Eigen::Matrix3d fd_b = (rotation_matrix(a, b + h) - rotation_matrix(a, b - h)) / (2 * h);
    EXPECT_LT((fd_a - drx * ry).cwiseAbs().maxCoeff(), 1e-5);
    EXPECT_LT((fd_b - rx * dry).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(CameraProperty, ProjectionIgnoresJointScale) {
  Gen g(33);
  for (int i = 0; i < 200; ++i) {
    const Intrinsics in = g.intrinsics();
    const Extrinsics e = g.pose();
    const Eigen::Vector3d p = g.point_near_origin();
    const Eigen::Vector2d px = project(p, in, e);
    for (double s : {0.5, 2.0, 10.0}) {
      Extrinsics scaled = e;
      scaled.t *= s;
      EXPECT_LT((project(s * p, in, scaled) - px).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(CameraProperty, BackprojectThenProjectRoundTrips) {
  Gen g(34);
  for (int i = 0; i < 100; ++i) {
    const Intrinsics in = g.intrinsics();
    const Extrinsics e = g.pose();
    const Eigen::Vector2d k(g.uniform(0.0, 320.0), g.uniform(0.0, 240.0));
    const double z_plane = g.uniform(-0.5, 0.5);
    const Eigen::Vector3d p = backproject_to_plane(k, in, e, z_plane);
    EXPECT_NEAR(p.z(), z_plane, 1e-12);
    EXPECT_LT((project(p, in, e) - k).norm(), 1e-6);
  }
}

TEST(CameraProperty, ProjectThenBackprojectIsIdentityOnPlane) {
  Gen g(35);
  for (int i = 0; i < 100; ++i) {
    const Intrinsics in = g.intrinsics();
    const Extrinsics e = g.pose(20.0);
    const double z_plane = g.uniform(-0.5, 0.5);
    const Eigen::Vector3d p(g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0), z_plane);
    EXPECT_LT((backproject_to_plane(project(p, in, e), in, e, z_plane) - p).norm(), 1e-9);
  }
}

TEST(CameraProperty, RotationDistanceIsSymmetricAndZeroOnSelf) {
  Gen g(36);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Matrix3d a = rotation_matrix(g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0));
    const Eigen::Matrix3d b = rotation_matrix(g.uniform(-1.0, 1.0), g.uniform(-1.0, 1.0));
    EXPECT_NEAR(rotation_angle_between(a, b), rotation_angle_between(b, a), 1e-12);
    EXPECT_NEAR(rotation_angle_between(a, a), 0.0, 1e-7);
    EXPECT_GE(rotation_angle_between(a, b), 0.0);
  }
}

}  // namespace
}  // namespace vsysid
