#pragma once

#include <vector>

#include <Eigen/Core>

#include "vsysid/image.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

struct FrameSequence {
  std::vector<GrayImage> frames;
  double frame_rate = 30.0;
};

struct KltConfig {
  int grid_rows = 10;
  int grid_cols = 10;
  int window = 15;  // odd, pixels
  int pyramid_levels = 3;
  int max_iters = 30;  // per level
  double convergence_eps = 0.01;  // pixels
  /// Mean absolute intensity difference (grey levels) above which a track ends.
  double max_residual = 12.0;
  /// Smallest eigenvalue of the area-normalised structure matrix, intensities
  /// scaled to [0, 1].
  double min_eigenvalue = 1e-4;
  int workers = 1;

  void validate() const;
};

/// rows * cols cell centres of a uniform partition, row-major.
std::vector<Eigen::Vector2d> grid_keypoints(int width, int height, int rows, int cols);

/// Float image with bilinear sampling, used by the tracker and its tests.
struct FloatImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  /// Bilinear interpolation with edge clamping.
  double sample(double x, double y) const;
};

FloatImage to_float(const GrayImage& img);
/// 2x downsampling with a [1 2 1]/4 separable blur.
FloatImage downsample(const FloatImage& img);
std::vector<FloatImage> build_pyramid(const GrayImage& img, int levels);

struct LkStep {
  Eigen::Vector2d position;  // the start point when the step is rejected
  bool ok = false;
  double residual = 0.0;  // mean absolute difference, grey levels
  double min_eigenvalue = 0.0;
};

/// Pyramidal translational Lucas-Kanade from prev to next starting at p.
LkStep track_point(const std::vector<FloatImage>& prev, const std::vector<FloatImage>& next,
                   const Eigen::Vector2d& p, const KltConfig& cfg);

/// Seeds grid keypoints on the first frame and follows each until it leaves
/// the image, loses texture or exceeds the residual threshold.
TrackSet track_sequence(const FrameSequence& seq, const KltConfig& cfg = {});

/// Reads every *.pgm of a directory in lexicographic order.
FrameSequence load_frames(const std::filesystem::path& dir, double fps);

}  // namespace vsysid
