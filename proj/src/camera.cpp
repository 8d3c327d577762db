#include "vsysid/camera.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>

#include "vsysid/error.hpp"

namespace vsysid {

void validate_intrinsics(const Intrinsics& intr) {
  if (!(intr.fx > 0.0) || !(intr.fy > 0.0) || !std::isfinite(intr.fx) ||
      !std::isfinite(intr.fy) || !std::isfinite(intr.cx) || !std::isfinite(intr.cy)) {
    throw Error(ErrorCode::Domain, "intrinsics need finite fx > 0 and fy > 0");
  }
}

Eigen::Matrix3d rotation_matrix(double pitch, double yaw) {
  const double ca = std::cos(pitch), sa = std::sin(pitch);
  const double cb = std::cos(yaw), sb = std::sin(yaw);
  Eigen::Matrix3d rx;
  rx << 1.0, 0.0, 0.0,
        0.0, ca, -sa,
        0.0, sa, ca;
  Eigen::Matrix3d ry;
  ry << cb, 0.0, sb,
        0.0, 1.0, 0.0,
        -sb, 0.0, cb;
  return rx * ry;
}

Eigen::Vector3d to_camera(const Eigen::Vector3d& p, const Extrinsics& extr) {
  return rotation_matrix(extr.pitch, extr.yaw) * p + extr.t;
}

namespace {

inline Eigen::Vector2d apply_intrinsics(const Eigen::Vector3d& pc, const Intrinsics& intr) {
  return {intr.fx * pc.x() / pc.z() + intr.cx, intr.fy * pc.y() / pc.z() + intr.cy};
}

}  // namespace

Eigen::Vector2d project(const Eigen::Vector3d& p, const Intrinsics& intr,
                        const Extrinsics& extr) {
  const Eigen::Vector3d pc = to_camera(p, extr);
  if (!(pc.z() > kMinDepth)) {
    throw Error(ErrorCode::BehindCamera,
                "point projects behind the camera (depth " + std::to_string(pc.z()) + ")");
  }
  return apply_intrinsics(pc, intr);
}

ProjectedTrajectory project_trajectory(const Trajectory3D& traj, const Intrinsics& intr,
                                       const Extrinsics& extr) {
  const Eigen::Matrix3d r = rotation_matrix(extr.pitch, extr.yaw);
  ProjectedTrajectory out;
  out.pixels.resize(traj.points.size(), Eigen::Vector2d::Zero());
  out.behind.resize(traj.points.size(), false);
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    const Eigen::Vector3d pc = r * traj.points[i] + extr.t;
    if (!(pc.z() > kMinDepth)) {
      out.behind[i] = true;
      ++out.behind_count;
      continue;
    }
    out.pixels[i] = apply_intrinsics(pc, intr);
  }
  return out;
}

Eigen::Vector3d backproject_to_plane(const Eigen::Vector2d& pixel, const Intrinsics& intr,
                                     const Extrinsics& extr, double z_plane) {
  validate_intrinsics(intr);
  const Eigen::Matrix3d r = rotation_matrix(extr.pitch, extr.yaw);
  // Ray in camera frame with unit depth, then expressed in the world frame.
  const Eigen::Vector3d ray_cam((pixel.x() - intr.cx) / intr.fx,
                                (pixel.y() - intr.cy) / intr.fy, 1.0);
  const Eigen::Vector3d centre = -r.transpose() * extr.t;
  const Eigen::Vector3d dir = r.transpose() * ray_cam;
  if (std::abs(dir.z()) < 1e-12) {
    throw Error(ErrorCode::NoIntersection, "viewing ray is parallel to the plane");
  }
  // depth along the optical axis equals the ray parameter since ray_cam.z == 1
  const double depth = (z_plane - centre.z()) / dir.z();
  if (!(depth > kMinDepth)) {
    throw Error(ErrorCode::NoIntersection, "plane lies behind the camera along this ray");
  }
  Eigen::Vector3d p = centre + depth * dir;
  p.z() = z_plane;
  return p;
}

double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace vsysid
