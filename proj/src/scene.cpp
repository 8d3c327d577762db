#include "vsysid/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "vsysid/error.hpp"

namespace vsysid {

namespace {

struct ObjectPath {
  std::vector<Eigen::Vector2d> pixels;
  std::vector<double> depth;
};

void validate_config(const SceneConfig& cfg) {
  if (!(cfg.fps > 0.0) || !std::isfinite(cfg.fps)) {
    throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': fps must be positive");
  }
  if (!(cfg.noise_px >= 0.0) || !std::isfinite(cfg.noise_px)) {
    throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': noise_px must be >= 0");
  }
  if (cfg.frames < 1) throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': frames must be >= 1");
  if (cfg.object_tracks < 1) {
    throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': object_tracks must be >= 1");
  }
  if (!cfg.amplitude_scales.empty() &&
      cfg.amplitude_scales.size() != static_cast<std::size_t>(cfg.object_tracks)) {
    throw Error(ErrorCode::Generation,
                "scene '" + cfg.id + "': amplitude_scales needs one entry per object track");
  }
  validate_intrinsics(cfg.intrinsics);
}

Theta object_theta(const SceneConfig& cfg, int k) {
  Theta th = cfg.true_theta;
  th.p0 += cfg.object_spacing * static_cast<double>(k);
  if (!cfg.amplitude_scales.empty()) th.eta[0] *= cfg.amplitude_scales[static_cast<std::size_t>(k)];
  return th;
}

ObjectPath object_path(const SceneConfig& cfg, int k) {
  const Theta th = object_theta(cfg, k);
  const Trajectory3D traj = rollout(cfg.model, th, static_cast<std::size_t>(cfg.frames), 1.0 / cfg.fps);
  const ProjectedTrajectory proj = project_trajectory(traj, cfg.intrinsics, cfg.true_extrinsics);
  for (std::size_t i = 0; i < proj.behind.size(); ++i) {
    if (proj.behind[i]) {
      throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': object " + std::to_string(k) +
                                             " projects behind the camera at frame " +
                                             std::to_string(i));
    }
  }
  ObjectPath path;
  path.pixels = proj.pixels;
  path.depth.reserve(traj.points.size());
  for (const auto& p : traj.points) path.depth.push_back(to_camera(p, cfg.true_extrinsics).z());
  return path;
}

std::vector<Eigen::Vector2d> distractor_path(const SceneConfig& cfg, std::size_t index) {
  const Distractor& d = cfg.distractors[index];
  std::vector<Eigen::Vector2d> out(static_cast<std::size_t>(cfg.frames));
  // Walks draw from their own stream so the noiseless path does not depend on
  // how much pixel noise was drawn before it.
  std::mt19937_64 walk_rng(cfg.seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (index + 1));
  std::normal_distribution<double> step(0.0, 1.0);
  Eigen::Vector2d walk = d.origin;
  for (int i = 0; i < cfg.frames; ++i) {
    const double t = static_cast<double>(i) / cfg.fps;
    switch (d.kind) {
      case DistractorKind::Circle: {
        const double a = d.phase + d.angular_speed * t;
        out[i] = d.origin + d.radius_px * Eigen::Vector2d(std::cos(a), std::sin(a));
        break;
      }
      case DistractorKind::Line:
        out[i] = d.origin + d.velocity_px * t;
        break;
      case DistractorKind::Static:
        out[i] = d.origin;
        break;
      case DistractorKind::RandomWalk:
        if (i > 0) walk += d.step_px * Eigen::Vector2d(step(walk_rng), step(walk_rng));
        out[i] = walk;
        break;
    }
  }
  return out;
}

void check_inside(const SceneConfig& cfg, const std::vector<Eigen::Vector2d>& path,
                  const std::string& what) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& p = path[i];
    if (p.x() < 0.0 || p.y() < 0.0 || p.x() > cfg.image_size.width ||
        p.y() > cfg.image_size.height) {
      throw Error(ErrorCode::Generation, "scene '" + cfg.id + "': " + what +
                                             " leaves the image at frame " + std::to_string(i));
    }
  }
}

}  // namespace

Scene generate_scene(const SceneConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 noise_rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double w = cfg.image_size.width;
  const double h = cfg.image_size.height;

  auto add_noise = [&](std::vector<Eigen::Vector2d> pts) {
    if (cfg.noise_px > 0.0) {
      for (auto& p : pts) {
        p.x() = std::clamp(p.x() + cfg.noise_px * noise(noise_rng), 0.0, w);
        p.y() = std::clamp(p.y() + cfg.noise_px * noise(noise_rng), 0.0, h);
      }
    }
    return pts;
  };

  Scene scene;
  scene.tracks.video_length = cfg.frames;
  scene.tracks.frame_rate = cfg.fps;
  scene.tracks.image_size = cfg.image_size;

  int next_id = 0;
  for (int k = 0; k < cfg.object_tracks; ++k) {
    ObjectPath path = object_path(cfg, k);
    check_inside(cfg, path.pixels, "object " + std::to_string(k));
    scene.tracks.tracks.push_back({next_id, 0, add_noise(std::move(path.pixels))});
    scene.truth.object_track_ids.push_back(next_id++);
  }
  for (std::size_t j = 0; j < cfg.distractors.size(); ++j) {
    auto path = distractor_path(cfg, j);
    check_inside(cfg, path, "distractor " + std::to_string(j));
    scene.tracks.tracks.push_back({next_id, 0, add_noise(std::move(path))});
    scene.truth.distractor_track_ids.push_back(next_id++);
  }

  GroundTruth& gt = scene.truth;
  gt.scene_id = cfg.id;
  gt.model = cfg.model;
  gt.theta = cfg.true_theta;
  gt.extrinsics = cfg.true_extrinsics;
  gt.intrinsics = cfg.intrinsics;
  gt.frames = cfg.frames;
  gt.fps = cfg.fps;
  gt.image_size = cfg.image_size;
  gt.noise_px = cfg.noise_px;
  gt.seed = cfg.seed;
  return scene;
}

namespace {

constexpr std::uint8_t kBackground = 40;
constexpr int kSuper = 4;

// Lambert-shaded sphere footprint so the disk interior carries gradient.
double sphere_shade(double dx, double dy, double base, double gain) {
  const double nz = std::sqrt(std::max(0.0, 1.0 - dx * dx - dy * dy));
  const double lx = -0.45, ly = -0.55, lz = 0.70;
  const double lambert = std::max(0.0, dx * lx + dy * ly + nz * lz);
  return base + gain * lambert;
}

void draw_disk(std::vector<double>& canvas, int w, int h, const Eigen::Vector2d& c, double r,
               double base, double gain) {
  if (!(r > 0.0)) return;
  const int x0 = std::max(0, static_cast<int>(std::floor(c.x() - r)) - 1);
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(c.x() + r)) + 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(c.y() - r)) - 1);
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(c.y() + r)) + 1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      double acc = 0.0;
      int covered = 0;
      for (int sy = 0; sy < kSuper; ++sy) {
        for (int sx = 0; sx < kSuper; ++sx) {
          // pixel (x, y) covers [x - 0.5, x + 0.5) so integer coordinates are centres
          const double px = x - 0.5 + (sx + 0.5) / kSuper;
          const double py = y - 0.5 + (sy + 0.5) / kSuper;
          const double dx = (px - c.x()) / r;
          const double dy = (py - c.y()) / r;
          if (dx * dx + dy * dy <= 1.0) {
            acc += sphere_shade(dx, dy, base, gain);
            ++covered;
          }
        }
      }
      if (covered == 0) continue;
      const double frac = static_cast<double>(covered) / (kSuper * kSuper);
      double& dst = canvas[static_cast<std::size_t>(y) * w + x];
      dst = (1.0 - frac) * dst + acc / (kSuper * kSuper);
    }
  }
}

}  // namespace

std::vector<GrayImage> rasterize_scene(const SceneConfig& cfg) {
  validate_config(cfg);
  const int w = cfg.image_size.width;
  const int h = cfg.image_size.height;

  std::vector<std::vector<Eigen::Vector2d>> distractors;
  for (std::size_t j = 0; j < cfg.distractors.size(); ++j) distractors.push_back(distractor_path(cfg, j));
  std::vector<ObjectPath> objects;
  for (int k = 0; k < cfg.object_tracks; ++k) objects.push_back(object_path(cfg, k));

  std::vector<GrayImage> frames;
  frames.reserve(static_cast<std::size_t>(cfg.frames));
  std::vector<double> canvas(static_cast<std::size_t>(w) * h);
  for (int i = 0; i < cfg.frames; ++i) {
    std::fill(canvas.begin(), canvas.end(), static_cast<double>(kBackground));
    for (std::size_t j = 0; j < distractors.size(); ++j) {
      draw_disk(canvas, w, h, distractors[j][i], cfg.distractors[j].disk_radius_px, 70.0, 120.0);
    }
    for (const auto& obj : objects) {
      const double r = cfg.object_radius_m * cfg.intrinsics.fx / obj.depth[i];
      draw_disk(canvas, w, h, obj.pixels[i], r, 60.0, 190.0);
    }
    GrayImage img(w, h);
    for (std::size_t p = 0; p < canvas.size(); ++p) {
      img.pixels[p] = static_cast<std::uint8_t>(std::clamp(std::lround(canvas[p]), 0L, 255L));
    }
    frames.push_back(std::move(img));
  }
  return frames;
}

}  // namespace vsysid
