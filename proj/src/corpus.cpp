#include "vsysid/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "vsysid/error.hpp"
#include "vsysid/klt.hpp"

namespace vsysid {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string scene_name(std::string_view preset, int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", index);
  return std::string(preset) + "-" + buf;
}

bool path_inside(const SceneConfig& c, double margin_x, double margin_y) {
  const Trajectory3D traj = rollout(c.model, c.true_theta, static_cast<std::size_t>(c.frames), 1.0 / c.fps);
  const ProjectedTrajectory pr = project_trajectory(traj, c.intrinsics, c.true_extrinsics);
  if (pr.penalized()) return false;
  for (const auto& p : pr.pixels) {
    if (p.x() < margin_x || p.x() > c.image_size.width - margin_x || p.y() < margin_y ||
        p.y() > c.image_size.height - margin_y) {
      return false;
    }
  }
  return true;
}

/// Moves the camera sideways so the object's first position lands on the
/// nearest tracking-grid point that keeps the whole path in view.
void snap_to_grid(SceneConfig& c) {
  const Eigen::Vector3d cam0 = to_camera(c.true_theta.p0, c.true_extrinsics);
  const Eigen::Vector2d px0 = project(c.true_theta.p0, c.intrinsics, c.true_extrinsics);
  auto grid = grid_keypoints(c.image_size.width, c.image_size.height, 10, 10);
  std::sort(grid.begin(), grid.end(), [&px0](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - px0).squaredNorm() < (b - px0).squaredNorm();
  });
  const Eigen::Vector3d t_orig = c.true_extrinsics.t;
  for (const auto& g : grid) {
    const Eigen::Vector2d d = g - px0;
    c.true_extrinsics.t = t_orig + Eigen::Vector3d(d.x() * cam0.z() / c.intrinsics.fx,
                                                   d.y() * cam0.z() / c.intrinsics.fy, 0.0);
    if (path_inside(c, 12.0, 12.0)) return;
  }
  throw Error(ErrorCode::Generation, "scene '" + c.id + "': no grid point keeps the object in view");
}

/// Closest approach between the object and any distractor over the noiseless
/// paths, pixels.
double min_clearance(const SceneConfig& c) {
  SceneConfig clean = c;
  clean.noise_px = 0.0;
  const Scene s = generate_scene(clean);
  const Track2D& object = s.tracks.tracks.front();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.tracks.tracks.size(); ++i) {
    const Track2D& d = s.tracks.tracks[i];
    for (std::size_t k = 0; k < std::min(object.lifetime(), d.lifetime()); ++k) {
      best = std::min(best, (object.points[k] - d.points[k]).norm());
    }
  }
  return best;
}

/// Re-draws distractor origins until no distractor passes within
/// clearance_px of the object; crossings would end the tracker's object track.
void separate_distractors(SceneConfig& c, double clearance_px) {
  std::mt19937_64 rng(c.seed ^ 0x5DEECE66DULL);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    if (min_clearance(c) >= clearance_px) return;
    for (auto& d : c.distractors) {
      if (d.kind == DistractorKind::Circle) {
        d.origin = {60.0 + 200.0 * U(rng), 50.0 + 140.0 * U(rng)};
      } else {
        // Either direction, starting on the side it moves away from.
        const bool rightward = U(rng) < 0.5;
        const double speed = std::abs(d.velocity_px.x());
        d.velocity_px.x() = rightward ? speed : -speed;
        d.origin = {rightward ? 30.0 + 40.0 * U(rng) : 290.0 - 40.0 * U(rng), 30.0 + 180.0 * U(rng)};
      }
    }
  }
  throw Error(ErrorCode::Generation, "scene '" + c.id + "': distractors cannot be kept clear of the object");
}

}  // namespace

SceneConfig ball_scene(std::uint64_t seed, double restitution, bool distractors) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SceneConfig c;
  c.id = "ball";
  c.model = MotionModel::bouncing_ball();
  c.seed = seed;
  c.noise_px = 1.0;
  c.true_extrinsics.pitch = (U(rng) * 50.0 - 25.0) * kDeg;
  c.true_extrinsics.yaw = (U(rng) * 50.0 - 25.0) * kDeg;
  const double h0 = 0.8 + 0.7 * U(rng);
  const double vx = (0.4 + 0.5 * U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
  const double vy = U(rng);
  const double duration = c.frames / c.fps;
  c.true_theta.eta = Eigen::Vector2d(restitution, 0.0);
  c.true_theta.p0 = {-vx * duration / 2.0, h0, 0.0};
  c.true_theta.v0 = {vx, vy, 0.0};

  // Centre the bounce region about 4.5-5.5 m in front of the camera, backing
  // off until the whole path fits in the image.
  const Eigen::Matrix3d R = rotation_matrix(c.true_extrinsics.pitch, c.true_extrinsics.yaw);
  const Eigen::Vector3d mid(0.0, h0 / 2.0, 0.0);
  bool placed = false;
  for (double depth = 4.5 + U(rng); depth < 50.0 && !placed; depth += 0.1) {
    c.true_extrinsics.t = Eigen::Vector3d(0.0, 0.0, depth) - R * mid;
    placed = path_inside(c, 25.0, 20.0);
  }
  if (!placed) throw Error(ErrorCode::Generation, "ball scene with seed " + std::to_string(seed) + " does not fit");

  Distractor circle;
  circle.kind = DistractorKind::Circle;
  circle.origin = {80.0 + 160.0 * U(rng), 60.0 + 120.0 * U(rng)};
  circle.radius_px = 20.0 + 10.0 * U(rng);
  circle.angular_speed = 2.0;
  Distractor line;
  line.kind = DistractorKind::Line;
  line.origin = {60.0 + 40.0 * U(rng), 60.0 + 120.0 * U(rng)};
  line.velocity_px = {25.0 + 10.0 * U(rng), 0.0};
  if (distractors) c.distractors = {circle, line};
  return c;
}

std::vector<SceneConfig> ball_corpus(int count, std::uint64_t seed, bool distractors) {
  constexpr double kRestitutions[] = {0.6, 0.75, 0.9};
  std::vector<SceneConfig> out;
  for (int i = 0; i < count; ++i) {
    SceneConfig c = ball_scene(seed + static_cast<std::uint64_t>(i), kRestitutions[i % 3], distractors);
    c.id = scene_name(distractors ? "ball" : "ball-clean", i);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SceneConfig> spiral_corpus(int count, std::uint64_t seed) {
  std::vector<SceneConfig> out;
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SceneConfig c;
    c.id = scene_name("spiral", i);
    c.model = MotionModel::archimedes_spiral();
    c.frames = 250;
    c.noise_px = 1.0;
    c.seed = seed + static_cast<std::uint64_t>(i);
    c.true_extrinsics.pitch = (U(rng) * 50.0 - 25.0) * kDeg;
    c.true_extrinsics.yaw = (U(rng) * 50.0 - 25.0) * kDeg;
    const double a = 0.2 + 0.2 * U(rng);
    const double b = 0.02 + 0.03 * U(rng);
    const double theta0 = 2.0 * std::numbers::pi * U(rng);
    const double omega = 0.8 + 0.7 * U(rng);
    c.true_theta.eta = Eigen::Vector4d(a, b, theta0, omega);
    const double cx = 0.3 * U(rng) - 0.15;
    const double cy = 0.3 * U(rng) - 0.15;
    c.true_theta.p0 = {cx, cy, 0.0};
    const Eigen::Matrix3d R = rotation_matrix(c.true_extrinsics.pitch, c.true_extrinsics.yaw);
    c.true_extrinsics.t = Eigen::Vector3d(0.0, 0.0, 4.5 + U(rng)) - R * c.true_theta.p0;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SceneConfig> breathing_corpus(int count, std::uint64_t seed) {
  constexpr int kPoints = 30;
  constexpr int kWalks = 10;
  std::vector<SceneConfig> out;
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> U(0.0, 1.0);
    SceneConfig c;
    c.id = scene_name("breathing", i);
    c.model = MotionModel::sinusoid();
    c.frames = 300;
    c.seed = seed + static_cast<std::uint64_t>(i);
    c.object_tracks = kPoints;
    c.true_extrinsics.pitch = (U(rng) * 20.0 - 10.0) * kDeg;
    c.true_extrinsics.yaw = (U(rng) * 20.0 - 10.0) * kDeg;
    const double depth = 2.5 + U(rng);
    const double frequency = 0.2 + 0.3 * static_cast<double>(i % 10) / 9.0;
    const double amplitude = 0.05;
    c.true_theta.eta = Eigen::Vector4d(amplitude, frequency, 2.0 * std::numbers::pi * U(rng), 0.0);
    c.object_spacing = {0.04, 0.0, 0.0};
    c.true_theta.p0 = {-0.02 * (kPoints - 1), 0.1 * U(rng) - 0.05, 0.0};
    double min_scale = 1.0;
    for (int k = 0; k < kPoints; ++k) {
      c.amplitude_scales.push_back(0.6 + 0.8 * U(rng));
      min_scale = std::min(min_scale, c.amplitude_scales.back());
    }
    const Eigen::Matrix3d R = rotation_matrix(c.true_extrinsics.pitch, c.true_extrinsics.yaw);
    c.true_extrinsics.t = Eigen::Vector3d(0.0, 0.0, depth) - R * Eigen::Vector3d(0.0, c.true_theta.p0.y(), 0.0);

    // Weakest track between 10 and 20 dB: sigma = (A / sqrt 2) / 10^(snr / 20).
    const double weakest_px = amplitude * min_scale * c.intrinsics.fy / depth;
    const double snr_db = 10.0 + 10.0 * U(rng);
    c.noise_px = weakest_px / std::sqrt(2.0) / std::pow(10.0, snr_db / 20.0);

    for (int k = 0; k < kWalks; ++k) {
      Distractor d;
      d.kind = DistractorKind::RandomWalk;
      d.origin = {40.0 + 240.0 * U(rng), 30.0 + 180.0 * U(rng)};
      d.step_px = 0.25;
      c.distractors.push_back(d);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SceneConfig> raster_corpus(int count, std::uint64_t seed) {
  constexpr double kRestitutions[] = {0.6, 0.75, 0.9};
  std::vector<SceneConfig> out;
  for (int i = 0; i < count; ++i) {
    SceneConfig c = ball_scene(seed + static_cast<std::uint64_t>(i), kRestitutions[i % 3], true);
    c.id = scene_name("raster", i);
    c.noise_px = 0.0;
    snap_to_grid(c);
    separate_distractors(c, 30.0);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<SceneConfig> make_corpus(std::string_view preset, int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorCode::Input, "corpus count must be >= 1");
  if (preset == "ball") return ball_corpus(count, seed, true);
  if (preset == "ball-clean") return ball_corpus(count, seed, false);
  if (preset == "spiral") return spiral_corpus(count, seed);
  if (preset == "breathing") return breathing_corpus(count, seed);
  if (preset == "raster") return raster_corpus(count, seed);
  throw Error(ErrorCode::Input, "unknown preset '" + std::string(preset) +
                                    "' (expected ball, ball-clean, spiral, breathing or raster)");
}

}  // namespace vsysid
