#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vsysid/camera.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/image.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

enum class DistractorKind { Circle, Line, Static, RandomWalk };

/// A distractor moving along a 2D parametric curve in pixel space.
///   Circle:     origin + radius_px * (cos, sin)(phase + angular_speed * t)
///   Line:       origin + velocity_px * t
///   Static:     origin
///   RandomWalk: origin + cumulative N(0, step_px^2) steps per frame
struct Distractor {
  DistractorKind kind = DistractorKind::Static;
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  double radius_px = 0.0;
  double angular_speed = 0.0;  // rad/s
  double phase = 0.0;          // rad
  Eigen::Vector2d velocity_px = Eigen::Vector2d::Zero();  // px/s
  double step_px = 0.0;
  double disk_radius_px = 10.0;  // rasterised size
};

/// Ground-truth generative description of one synthetic scene.
struct SceneConfig {
  std::string id = "scene";
  MotionModel model;
  Theta true_theta;
  Extrinsics true_extrinsics;
  Intrinsics intrinsics;
  int frames = 120;
  double fps = 30.0;
  ImageSize image_size;
  double noise_px = 0.0;
  std::vector<Distractor> distractors;
  std::uint64_t seed = 0;

  /// Copies of the object of interest. Copy k is offset by object_spacing * k
  /// (world metres) with its first physical parameter scaled by
  /// amplitude_scales[k] when given. Used for region-of-interest corpora.
  int object_tracks = 1;
  Eigen::Vector3d object_spacing = Eigen::Vector3d::Zero();
  std::vector<double> amplitude_scales;

  /// Radius of the rendered object, metres; scaled by depth when rasterised.
  double object_radius_m = 0.12;
};

/// What the generator knows and the fitter must recover.
struct GroundTruth {
  std::string scene_id;
  MotionModel model;
  Theta theta;
  Extrinsics extrinsics;
  Intrinsics intrinsics;
  std::vector<int> object_track_ids;
  std::vector<int> distractor_track_ids;
  int frames = 0;
  double fps = 30.0;
  ImageSize image_size;
  double noise_px = 0.0;
  std::uint64_t seed = 0;
};

struct Scene {
  TrackSet tracks;
  GroundTruth truth;
};

/// Object tracks come first (ids 0..object_tracks-1), then distractors.
/// Deterministic in cfg.seed. Throws Error(Generation) naming the first
/// frame at which the object projects behind the camera.
Scene generate_scene(const SceneConfig& cfg);

/// Renders noiseless 8-bit frames: shaded disks on a flat background.
/// The object is drawn last so it is never occluded.
std::vector<GrayImage> rasterize_scene(const SceneConfig& cfg);

}  // namespace vsysid
