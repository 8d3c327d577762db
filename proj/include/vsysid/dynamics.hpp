#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace vsysid {

enum class ModelKind { BouncingBall, ArchimedesSpiral, Sinusoid1D };

/// A family of planar equations of motion. Gravity is a fixed constant of the
/// bouncing-ball family and never a learnable parameter.
struct MotionModel {
  ModelKind kind = ModelKind::BouncingBall;
  double gravity = 9.8;

  static MotionModel bouncing_ball() { return {ModelKind::BouncingBall, 9.8}; }
  static MotionModel archimedes_spiral() { return {ModelKind::ArchimedesSpiral, 9.8}; }
  static MotionModel sinusoid() { return {ModelKind::Sinusoid1D, 9.8}; }

  /// Number of learnable physical parameters (eta) for this family.
  int eta_dim() const noexcept;
  /// Whether the initial velocity is a learnable quantity for this family.
  bool has_velocity() const noexcept { return kind == ModelKind::BouncingBall; }
};

std::string_view model_name(ModelKind kind) noexcept;
/// Accepts "ball", "spiral", "sinusoid" and the long family names.
ModelKind parse_model_name(std::string_view name);

/// Physical parameters plus initial conditions.
///
/// eta layout per family:
///   BouncingBall      (restitution, floor_y)
///   ArchimedesSpiral  (a, b, theta0, omega)   r = a + b t, angle = theta0 + omega t
///   Sinusoid1D        (amplitude, frequency_hz, phase, offset)
///
/// p0 is the initial position for the ball, the spiral centre, and the
/// anchor the sinusoid oscillates about along world y.
struct Theta {
  Eigen::VectorXd eta;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d v0 = Eigen::Vector3d::Zero();

  bool operator==(const Theta& other) const {
    return eta == other.eta && p0 == other.p0 && v0 == other.v0;
  }
};

namespace ball {
inline constexpr int kRestitution = 0;
inline constexpr int kFloorY = 1;
}  // namespace ball
namespace spiral {
inline constexpr int kA = 0;
inline constexpr int kB = 1;
inline constexpr int kTheta0 = 2;
inline constexpr int kOmega = 3;
}  // namespace spiral
namespace sinusoid {
inline constexpr int kAmplitude = 0;
inline constexpr int kFrequency = 1;
inline constexpr int kPhase = 2;
inline constexpr int kOffset = 3;
}  // namespace sinusoid

struct Trajectory3D {
  std::vector<Eigen::Vector3d> points;
  double dt = 0.0;
};

/// Integration sub-steps per emitted sample of the bouncing ball.
inline constexpr int kEulerSubsteps = 10;

/// Throws Error(Domain) when theta does not satisfy the family's invariants.
void validate_theta(const MotionModel& model, const Theta& theta);

/// Rolls out `steps` samples spaced `dt` seconds apart, the first at t = 0.
///
/// The bouncing ball is integrated with explicit Euler at dt / kEulerSubsteps.
/// When a sub-step carries y to or below the floor, the contact time inside
/// the sub-step is interpolated, the vertical velocity is reflected and
/// scaled by the restitution, and the remainder of the sub-step is spent on
/// the rebound. A rebound that cannot lift off leaves the ball resting.
/// The spiral and sinusoid are evaluated in closed form.
Trajectory3D rollout(const MotionModel& model, const Theta& theta,
                     std::size_t steps, double dt);

/// First `t_count` samples of rollout(); identical element for element.
Trajectory3D rollout_prefix(const MotionModel& model, const Theta& theta,
                            std::size_t t_count, double dt);

}  // namespace vsysid
