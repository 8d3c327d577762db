#include "vsysid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vsysid/error.hpp"

namespace vsysid {

int MotionModel::eta_dim() const noexcept {
  switch (kind) {
    case ModelKind::BouncingBall:
      return 2;
    case ModelKind::ArchimedesSpiral:
    case ModelKind::Sinusoid1D:
      return 4;
  }
  return 0;
}

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::BouncingBall:
      return "ball";
    case ModelKind::ArchimedesSpiral:
      return "spiral";
    case ModelKind::Sinusoid1D:
      return "sinusoid";
  }
  return "unknown";
}

ModelKind parse_model_name(std::string_view name) {
  if (name == "ball" || name == "bouncing_ball" || name == "BouncingBall") {
    return ModelKind::BouncingBall;
  }
  if (name == "spiral" || name == "archimedes_spiral" || name == "ArchimedesSpiral") {
    return ModelKind::ArchimedesSpiral;
  }
  if (name == "sinusoid" || name == "sinusoid1d" || name == "Sinusoid1D") {
    return ModelKind::Sinusoid1D;
  }
  throw Error(ErrorCode::Input, "unknown motion model '" + std::string(name) + "'");
}

void validate_theta(const MotionModel& model, const Theta& theta) {
  if (theta.eta.size() != model.eta_dim()) {
    throw Error(ErrorCode::Domain, "model '" + std::string(model_name(model.kind)) +
                                       "' expects " + std::to_string(model.eta_dim()) +
                                       " physical parameters, got " +
                                       std::to_string(theta.eta.size()));
  }
  if (!theta.eta.allFinite() || !theta.p0.allFinite() || !theta.v0.allFinite()) {
    throw Error(ErrorCode::Domain, "non-finite motion parameter");
  }
  if (theta.v0.z() != 0.0) {
    throw Error(ErrorCode::Domain, "planar models require v0.z == 0");
  }
  switch (model.kind) {
    case ModelKind::BouncingBall: {
      const double eps = theta.eta[ball::kRestitution];
      if (eps < 0.0 || eps > 1.0) {
        throw Error(ErrorCode::Domain, "restitution must lie in [0, 1], got " +
                                           std::to_string(eps));
      }
      break;
    }
    case ModelKind::ArchimedesSpiral:
    case ModelKind::Sinusoid1D:
      if (!theta.v0.isZero(0.0)) {
        throw Error(ErrorCode::Domain, "initial velocity is unused by this model and must be zero");
      }
      break;
  }
}

namespace {

void rollout_ball(const MotionModel& model, const Theta& theta, double dt,
                  std::vector<Eigen::Vector3d>& out) {
  const double eps = theta.eta[ball::kRestitution];
  const double floor_y = theta.eta[ball::kFloorY];
  const double h = dt / kEulerSubsteps;
  const double g = model.gravity;

  double x = theta.p0.x();
  double y = theta.p0.y();
  const double z = theta.p0.z();
  const double vx = theta.v0.x();
  double vy = theta.v0.y();

  bool resting = false;
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = {x, y, z};
    if (k + 1 == out.size()) break;
    for (int s = 0; s < kEulerSubsteps; ++s) {
      x += vx * h;
      if (resting) continue;
      const double y_next = y + vy * h;
      if (y_next > floor_y || vy > 0.0) {
        y = y_next;
        vy -= g * h;
        continue;
      }
      // Contact inside this sub-step: locate it by linear interpolation,
      // reflect, and spend the rest of the sub-step on the rebound.
      const double frac = y > floor_y ? (y - floor_y) / (y - y_next) : 0.0;
      const double v_rebound = -eps * (vy - g * frac * h);
      if (v_rebound <= 0.0) {
        resting = true;
        y = floor_y;
        vy = 0.0;
        continue;
      }
      y = floor_y + v_rebound * (1.0 - frac) * h;
      vy = v_rebound - g * (1.0 - frac) * h;
    }
  }
}

void rollout_spiral(const Theta& theta, double dt, std::vector<Eigen::Vector3d>& out) {
  const double a = theta.eta[spiral::kA];
  const double b = theta.eta[spiral::kB];
  const double theta0 = theta.eta[spiral::kTheta0];
  const double omega = theta.eta[spiral::kOmega];
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double r = a + b * t;
    const double angle = theta0 + omega * t;
    out[k] = theta.p0 + Eigen::Vector3d(r * std::cos(angle), r * std::sin(angle), 0.0);
  }
}

void rollout_sinusoid(const Theta& theta, double dt, std::vector<Eigen::Vector3d>& out) {
  const double amp = theta.eta[sinusoid::kAmplitude];
  const double freq = theta.eta[sinusoid::kFrequency];
  const double phase = theta.eta[sinusoid::kPhase];
  const double offset = theta.eta[sinusoid::kOffset];
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = static_cast<double>(k) * dt;
    const double s = amp * std::sin(2.0 * std::numbers::pi * freq * t + phase) + offset;
    out[k] = theta.p0 + Eigen::Vector3d(0.0, s, 0.0);
  }
}

}  // namespace

Trajectory3D rollout(const MotionModel& model, const Theta& theta, std::size_t steps,
                     double dt) {
  if (steps < 1) throw Error(ErrorCode::Domain, "rollout needs at least one step");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::Domain, "rollout needs a positive finite dt");
  }
  validate_theta(model, theta);

  Trajectory3D traj;
  traj.dt = dt;
  traj.points.resize(steps);
  switch (model.kind) {
    case ModelKind::BouncingBall:
      rollout_ball(model, theta, dt, traj.points);
      break;
    case ModelKind::ArchimedesSpiral:
      rollout_spiral(theta, dt, traj.points);
      break;
    case ModelKind::Sinusoid1D:
      rollout_sinusoid(theta, dt, traj.points);
      break;
  }
  for (const auto& p : traj.points) {
    if (!p.allFinite()) throw Error(ErrorCode::Domain, "rollout produced a non-finite point");
  }
  return traj;
}

Trajectory3D rollout_prefix(const MotionModel& model, const Theta& theta, std::size_t t_count,
                            double dt) {
  return rollout(model, theta, t_count, dt);
}

}  // namespace vsysid
