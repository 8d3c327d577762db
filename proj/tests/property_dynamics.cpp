#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "support.hpp"
#include "vsysid/dynamics.hpp"

namespace vsysid {
namespace {

using test::Gen;
using test::kPi;

Theta random_theta(Gen& g, const MotionModel& model) {
  Theta th;
  switch (model.kind) {
    case ModelKind::BouncingBall:
      th.eta = Eigen::Vector2d(g.uniform(0.0, 1.0), g.uniform(-0.5, 0.5));
      th.p0 = {g.uniform(-1.0, 1.0), g.uniform(0.6, 2.0), g.uniform(-1.0, 1.0)};
      th.v0 = {g.uniform(-1.0, 1.0), g.uniform(-1.0, 2.0), 0.0};
      break;
    case ModelKind::ArchimedesSpiral:
      th.eta = Eigen::Vector4d(g.uniform(0.0, 1.0), g.uniform(0.0, 0.2), g.uniform(0.0, 2 * kPi),
                               g.uniform(-3.0, 3.0));
      th.p0 = g.vec3(-1.0, 1.0);
      break;
    case ModelKind::Sinusoid1D:
      th.eta = Eigen::Vector4d(g.uniform(0.01, 2.0), g.uniform(0.1, 2.0), g.uniform(0.0, 2 * kPi),
                               g.uniform(-1.0, 1.0));
      th.p0 = g.vec3(-1.0, 1.0);
      break;
  }
  return th;
}

TEST(DynamicsProperty, RolloutIsDeterministic) {
  Gen g(11);
  for (const MotionModel& model :
       {MotionModel::bouncing_ball(), MotionModel::archimedes_spiral(), MotionModel::sinusoid()}) {
    for (int i = 0; i < 30; ++i) {
      const Theta th = random_theta(g, model);
      const double dt = g.uniform(0.005, 0.05);
      const auto steps = static_cast<std::size_t>(g.integer(1, 200));
      EXPECT_EQ(rollout(model, th, steps, dt).points, rollout(model, th, steps, dt).points);
    }
  }
}

TEST(DynamicsProperty, PrefixMatchesFullRollout) {
  Gen g(12);
  for (const MotionModel& model :
       {MotionModel::bouncing_ball(), MotionModel::archimedes_spiral(), MotionModel::sinusoid()}) {
    for (int i = 0; i < 20; ++i) {
      const Theta th = random_theta(g, model);
      const Trajectory3D full = rollout(model, th, 150, 1.0 / 30.0);
      const auto n = static_cast<std::size_t>(g.integer(1, 150));
      const Trajectory3D head = rollout_prefix(model, th, n, 1.0 / 30.0);
      ASSERT_EQ(head.points.size(), n);
      for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(head.points[k], full.points[k]);
    }
  }
}

TEST(DynamicsProperty, WeightlessBallMovesInStraightLine) {
  Gen g(13);
  MotionModel weightless = MotionModel::bouncing_ball();
  weightless.gravity = 0.0;
  for (int i = 0; i < 30; ++i) {
    Theta th = random_theta(g, weightless);
    th.v0.y() = g.uniform(0.0, 1.0);  // upward, so the floor is never reached
    th.eta[ball::kFloorY] = th.p0.y() - 1.0;
    const Trajectory3D traj = rollout(weightless, th, 100, 1.0 / 30.0);
    const Eigen::Vector3d dir = th.v0.normalized();
    for (const auto& p : traj.points) {
      const Eigen::Vector3d d = p - th.p0;
      EXPECT_LT((d - d.dot(dir) * dir).norm(), 1e-12);
    }
  }
}

TEST(DynamicsProperty, ElasticPeaksHoldAtFineStep) {
  Gen g(14);
  const MotionModel model = MotionModel::bouncing_ball();
  for (int i = 0; i < 5; ++i) {
    Theta th;
    const double floor_y = g.uniform(-0.5, 0.5);
    th.eta = Eigen::Vector2d(1.0, floor_y);
    th.p0 = {0.0, floor_y + g.uniform(0.5, 1.5), 0.0};
    const double dt = 1e-4;
    const Trajectory3D traj = rollout(model, th, 25000, dt);
    std::vector<double> peaks{th.p0.y()};
    for (std::size_t k = 1; k + 1 < traj.points.size(); ++k) {
      const double y = traj.points[k].y();
      if (y > traj.points[k - 1].y() && y >= traj.points[k + 1].y()) peaks.push_back(y);
    }
    ASSERT_GE(peaks.size(), 2u);
    for (std::size_t k = 1; k < peaks.size(); ++k) {
      const double ratio = (peaks[k] - floor_y) / (peaks[k - 1] - floor_y);
      EXPECT_NEAR(ratio, 1.0, 0.005);
    }
  }
}

TEST(DynamicsProperty, SpiralRadiusIsExactClosedForm) {
  Gen g(15);
  const MotionModel model = MotionModel::archimedes_spiral();
  for (int i = 0; i < 30; ++i) {
    const Theta th = random_theta(g, model);
    const double dt = g.uniform(0.01, 0.1);
    const Trajectory3D traj = rollout(model, th, 200, dt);
    for (std::size_t k = 0; k < traj.points.size(); ++k) {
      const double r = th.eta[spiral::kA] + th.eta[spiral::kB] * (static_cast<double>(k) * dt);
      EXPECT_NEAR((traj.points[k] - th.p0).norm(), r, 1e-12 * (1.0 + r));
    }
  }
}

TEST(DynamicsProperty, SinusoidMeanOverWholePeriodsIsOffset) {
  Gen g(16);
  const MotionModel model = MotionModel::sinusoid();
  for (int i = 0; i < 30; ++i) {
    const Theta th = random_theta(g, model);
    const double freq = th.eta[sinusoid::kFrequency];
    const int samples_per_period = g.integer(8, 64);
    const int periods = g.integer(1, 6);
    const double dt = 1.0 / (freq * samples_per_period);
    const Trajectory3D traj =
        rollout(model, th, static_cast<std::size_t>(samples_per_period * periods), dt);
    double mean = 0.0;
    for (const auto& p : traj.points) mean += p.y() - th.p0.y();
    mean /= static_cast<double>(traj.points.size());
    EXPECT_NEAR(mean, th.eta[sinusoid::kOffset], 1e-9 * th.eta[sinusoid::kAmplitude]);
  }
}

TEST(DynamicsProperty, BallNeverSinksBelowFloor) {
  Gen g(17);
  const MotionModel model = MotionModel::bouncing_ball();
  for (int i = 0; i < 50; ++i) {
    const Theta th = random_theta(g, model);
    const Trajectory3D traj = rollout(model, th, 300, 1.0 / 30.0);
    for (const auto& p : traj.points) {
      ASSERT_TRUE(p.allFinite());
      EXPECT_GE(p.y(), th.eta[ball::kFloorY] - 1e-12);
    }
  }
}

}  // namespace
}  // namespace vsysid
