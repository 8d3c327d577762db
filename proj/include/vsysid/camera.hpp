#pragma once

#include <vector>

#include <Eigen/Core>

#include "vsysid/dynamics.hpp"

namespace vsysid {

/// Pinhole intrinsics in pixels. Pixel x grows rightward, y downward.
struct Intrinsics {
  double fx = 280.0;
  double fy = 280.0;
  double cx = 160.0;
  double cy = 120.0;

  bool operator==(const Intrinsics&) const = default;
};

/// Roll-free camera pose: p_cam = R(pitch, yaw) * p_world + t.
struct Extrinsics {
  double pitch = 0.0;  // radians, rotation about x
  double yaw = 0.0;    // radians, rotation about y
  Eigen::Vector3d t = Eigen::Vector3d::Zero();

  bool operator==(const Extrinsics& other) const {
    return pitch == other.pitch && yaw == other.yaw && t == other.t;
  }
};

/// Points closer than this to the image plane count as behind the camera.
inline constexpr double kMinDepth = 1e-6;

void validate_intrinsics(const Intrinsics& intr);

/// R = Rx(pitch) * Ry(yaw); roll is fixed at zero.
Eigen::Matrix3d rotation_matrix(double pitch, double yaw);

Eigen::Vector3d to_camera(const Eigen::Vector3d& p, const Extrinsics& extr);

/// Throws Error(BehindCamera) when the camera-frame depth is <= kMinDepth.
Eigen::Vector2d project(const Eigen::Vector3d& p, const Intrinsics& intr,
                        const Extrinsics& extr);

struct ProjectedTrajectory {
  std::vector<Eigen::Vector2d> pixels;  // (0, 0) where behind[i] is set
  std::vector<bool> behind;
  std::size_t behind_count = 0;

  bool penalized() const noexcept { return behind_count > 0; }
};

ProjectedTrajectory project_trajectory(const Trajectory3D& traj, const Intrinsics& intr,
                                       const Extrinsics& extr);

/// World point on the plane z = z_plane whose projection is `pixel`.
/// Throws Error(NoIntersection) when the ray is parallel to the plane or
/// meets it at non-positive depth.
Eigen::Vector3d backproject_to_plane(const Eigen::Vector2d& pixel, const Intrinsics& intr,
                                     const Extrinsics& extr, double z_plane);

/// Geodesic distance on SO(3), radians.
double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

}  // namespace vsysid
