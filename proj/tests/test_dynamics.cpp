#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "support.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/error.hpp"

namespace vsysid {
namespace {

using test::Gen;
using test::kPi;

Theta ball_theta(double eps, double floor_y, Eigen::Vector3d p0, Eigen::Vector3d v0) {
  Theta th;
  th.eta = Eigen::Vector2d(eps, floor_y);
  th.p0 = p0;
  th.v0 = v0;
  return th;
}

Theta spiral_theta(double a, double b, double theta0, double omega, Eigen::Vector3d p0) {
  Theta th;
  th.eta = Eigen::Vector4d(a, b, theta0, omega);
  th.p0 = p0;
  return th;
}

Theta sinusoid_theta(double amp, double freq, double phase, double offset) {
  Theta th;
  th.eta = Eigen::Vector4d(amp, freq, phase, offset);
  return th;
}

std::vector<double> heights(const Trajectory3D& traj) {
  std::vector<double> y;
  for (const auto& p : traj.points) y.push_back(p.y());
  return y;
}

/// Local maxima strictly after the first local minimum.
std::vector<double> rebound_peaks(const std::vector<double>& y) {
  std::vector<double> peaks;
  bool bounced = false;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y[i - 1] && y[i] <= y[i + 1]) bounced = true;
    if (bounced && y[i] > y[i - 1] && y[i] >= y[i + 1]) peaks.push_back(y[i]);
  }
  return peaks;
}

TEST(ModelFamily, DeclaresParameterCounts) {
  EXPECT_EQ(MotionModel::bouncing_ball().eta_dim(), 2);
  EXPECT_EQ(MotionModel::archimedes_spiral().eta_dim(), 4);
  EXPECT_EQ(MotionModel::sinusoid().eta_dim(), 4);
  EXPECT_DOUBLE_EQ(MotionModel::bouncing_ball().gravity, 9.8);
}

TEST(ModelFamily, ParsesNames) {
  EXPECT_EQ(parse_model_name("ball"), ModelKind::BouncingBall);
  EXPECT_EQ(parse_model_name("spiral"), ModelKind::ArchimedesSpiral);
  EXPECT_EQ(parse_model_name("sinusoid"), ModelKind::Sinusoid1D);
  EXPECT_THROW(parse_model_name("pendulum"), Error);
}

TEST(Rollout, ElasticBounceReturnsToDropHeight) {
  const MotionModel model = MotionModel::bouncing_ball();
  const double y0 = 1.0;
  const Theta th = ball_theta(1.0, 0.0, {0.0, y0, 5.0}, Eigen::Vector3d::Zero());
  // Ballistic oracle: impact after sqrt(2 y0 / g), then a symmetric flight.
  const double t_impact = std::sqrt(2.0 * y0 / model.gravity);
  const double dt = 1e-3;
  const auto steps = static_cast<std::size_t>(3.5 * t_impact / dt);
  const Trajectory3D traj = rollout(model, th, steps, dt);

  const auto peaks = rebound_peaks(heights(traj));
  ASSERT_FALSE(peaks.empty());
  EXPECT_NEAR(peaks.front(), y0, 0.01 * y0);

  // The first contact lands where the free-fall oracle puts it.
  std::size_t first_min = 0;
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    if (traj.points[i].y() > traj.points[i - 1].y()) {
      first_min = i - 1;
      break;
    }
  }
  EXPECT_NEAR(static_cast<double>(first_min) * dt, t_impact, 2.0 * dt);
}

TEST(Rollout, SpiralWithoutGrowthIsCircle) {
  const Eigen::Vector3d centre(0.3, -0.2, 4.0);
  const Trajectory3D traj =
      rollout(MotionModel::archimedes_spiral(), spiral_theta(2.0, 0.0, 0.0, 1.0, centre), 200, 0.05);
  for (const auto& p : traj.points) EXPECT_NEAR((p - centre).norm(), 2.0, 1e-12);
}

TEST(Rollout, ZeroRestitutionComesToRest) {
  const MotionModel model = MotionModel::bouncing_ball();
  const Trajectory3D traj = rollout(model, ball_theta(0.0, 0.2, {0.0, 1.0, 5.0}, {0.5, 0.0, 0.0}), 90, 1.0 / 30.0);
  std::size_t contact = traj.points.size();
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (traj.points[i].y() <= 0.2) {
      contact = i;
      break;
    }
  }
  ASSERT_LT(contact, traj.points.size());
  for (std::size_t i = contact; i < traj.points.size(); ++i) EXPECT_DOUBLE_EQ(traj.points[i].y(), 0.2);
  // Horizontal motion keeps going at the initial speed.
  EXPECT_NEAR(traj.points.back().x() - traj.points.front().x(), 0.5 * 89.0 / 30.0, 1e-9);
}

TEST(Rollout, ZComponentIsConstant) {
  const Trajectory3D traj =
      rollout(MotionModel::bouncing_ball(), ball_theta(0.7, 0.0, {0.1, 1.3, 2.5}, {0.4, 1.0, 0.0}), 120, 1.0 / 30.0);
  for (const auto& p : traj.points) EXPECT_EQ(p.z(), 2.5);
}

TEST(Rollout, PrefixOfFullLengthIsIdentical) {
  const MotionModel model = MotionModel::bouncing_ball();
  const Theta th = ball_theta(0.75, 0.0, {-1.0, 1.2, 0.0}, {0.6, 0.4, 0.0});
  const Trajectory3D full = rollout(model, th, 120, 1.0 / 30.0);
  EXPECT_EQ(rollout_prefix(model, th, 120, 1.0 / 30.0).points, full.points);
  const Trajectory3D head = rollout_prefix(model, th, 25, 1.0 / 30.0);
  ASSERT_EQ(head.points.size(), 25u);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_EQ(head.points[i], full.points[i]);
}

TEST(Rollout, SpiralFirstSampleByHand) {
  const Eigen::Vector3d centre(1.0, 2.0, 3.0);
  const Trajectory3D one =
      rollout_prefix(MotionModel::archimedes_spiral(), spiral_theta(0.4, 0.1, 0.7, 1.3, centre), 1, 0.1);
  ASSERT_EQ(one.points.size(), 1u);
  EXPECT_NEAR(one.points[0].x(), 1.0 + 0.4 * std::cos(0.7), 1e-15);
  EXPECT_NEAR(one.points[0].y(), 2.0 + 0.4 * std::sin(0.7), 1e-15);
  EXPECT_EQ(one.points[0].z(), 3.0);
}

TEST(Rollout, SinusoidRidesOnWorldY) {
  const Trajectory3D traj = rollout(MotionModel::sinusoid(), sinusoid_theta(0.5, 0.25, 0.3, -0.1), 40, 0.1);
  for (std::size_t k = 0; k < traj.points.size(); ++k) {
    const double t = 0.1 * static_cast<double>(k);
    EXPECT_EQ(traj.points[k].x(), 0.0);
    EXPECT_EQ(traj.points[k].z(), 0.0);
    EXPECT_NEAR(traj.points[k].y(), 0.5 * std::sin(2.0 * kPi * 0.25 * t + 0.3) - 0.1, 1e-15);
  }
}

TEST(Rollout, RejectsBadArguments) {
  const MotionModel ball = MotionModel::bouncing_ball();
  const Theta ok = ball_theta(0.5, 0.0, {0.0, 1.0, 5.0}, Eigen::Vector3d::Zero());
  EXPECT_THROW(rollout(ball, ok, 0, 0.1), Error);
  EXPECT_THROW(rollout(ball, ok, 10, 0.0), Error);
  EXPECT_THROW(rollout(ball, ok, 10, std::numeric_limits<double>::quiet_NaN()), Error);

  Theta nan = ok;
  nan.p0.x() = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(rollout(ball, nan, 10, 0.1), Error);

  Theta too_bouncy = ok;
  too_bouncy.eta[ball::kRestitution] = 1.2;
  EXPECT_THROW(rollout(ball, too_bouncy, 10, 0.1), Error);

  Theta depth_velocity = ok;
  depth_velocity.v0.z() = 0.1;
  EXPECT_THROW(rollout(ball, depth_velocity, 10, 0.1), Error);

  Theta spiral_velocity = spiral_theta(1.0, 0.1, 0.0, 1.0, Eigen::Vector3d::Zero());
  spiral_velocity.v0.x() = 0.1;
  EXPECT_THROW(rollout(MotionModel::archimedes_spiral(), spiral_velocity, 10, 0.1), Error);

  Theta short_eta;
  short_eta.eta = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(rollout(MotionModel::sinusoid(), short_eta, 10, 0.1), Error);

  try {
    rollout(ball, nan, 10, 0.1);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Domain);
  }
}

}  // namespace
}  // namespace vsysid
