#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vsysid/camera.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/scene.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid::test {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

/// Small seeded generator for property tests. Every test owns one so a
/// failing case is reproducible from the test name alone.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal(double sd = 1.0) { return std::normal_distribution<double>(0.0, sd)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  std::mt19937_64& engine() { return rng_; }

  Eigen::Vector3d vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
  Eigen::Vector2d vec2(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }

  Intrinsics intrinsics() {
    Intrinsics in;
    in.fx = uniform(150.0, 600.0);
    in.fy = in.fx * uniform(0.9, 1.1);
    in.cx = uniform(100.0, 220.0);
    in.cy = uniform(80.0, 160.0);
    return in;
  }

  /// Pose looking roughly along +z at points a few metres away.
  Extrinsics pose(double max_angle_deg = 30.0) {
    Extrinsics e;
    e.pitch = uniform(-max_angle_deg, max_angle_deg) * kDeg;
    e.yaw = uniform(-max_angle_deg, max_angle_deg) * kDeg;
    e.t = {uniform(-0.5, 0.5), uniform(-0.5, 0.5), uniform(3.0, 8.0)};
    return e;
  }

  /// World point that lands in front of the camera for pose().
  Eigen::Vector3d point_near_origin() { return vec3(-1.0, 1.0); }

  Track2D track(int id, std::size_t len, double spread) {
    Track2D t;
    t.id = id;
    Eigen::Vector2d p = vec2(50.0, 250.0);
    for (std::size_t i = 0; i < len; ++i) {
      p += Eigen::Vector2d(normal(spread), normal(spread));
      t.points.push_back(p);
    }
    return t;
  }

  TrackSet track_set(int n, int video_length) {
    TrackSet ts;
    ts.video_length = video_length;
    for (int i = 0; i < n; ++i) {
      const int len = integer(1, video_length);
      Track2D t = track(i, static_cast<std::size_t>(len), uniform(0.0, 4.0));
      t.start_frame = integer(0, video_length - len);
      ts.tracks.push_back(std::move(t));
    }
    return ts;
  }

 private:
  std::mt19937_64 rng_;
};

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("vsysid-" + tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Noiseless fronto-parallel bouncing-ball scene with the ball plane at 5 m.
inline SceneConfig simple_ball_scene(double restitution, double noise_px = 0.0) {
  SceneConfig c;
  c.id = "simple-ball";
  c.model = MotionModel::bouncing_ball();
  c.true_theta.eta = Eigen::Vector2d(restitution, 0.0);
  c.true_theta.p0 = {-1.2, 1.2, 0.0};
  c.true_theta.v0 = {0.6, 0.5, 0.0};
  c.true_extrinsics.t = {0.0, -0.6, 5.0};
  c.noise_px = noise_px;
  c.seed = 7;
  return c;
}

}  // namespace vsysid::test
