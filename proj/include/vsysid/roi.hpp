#pragma once

#include <vector>

#include "vsysid/tracks.hpp"

namespace vsysid {

struct Series1D {
  std::vector<double> values;
  double dt = 1.0 / 30.0;
};

/// amplitude * sin(2 pi frequency t + phase) + offset, amplitude >= 0.
struct SinusoidFit {
  double amplitude = 0.0;
  double frequency = 0.0;  // Hz
  double phase = 0.0;      // rad, in [0, 2 pi)
  double offset = 0.0;
  double mse = 0.0;

  double operator()(double t) const;
};

/// Projection of the centred points on the principal axis. The axis is
/// oriented so its larger-magnitude component is positive (y on ties), which
/// gives every track moving along the same axis the same sign.
/// Throws Error(Degenerate) for fewer than 2 points or zero variance.
Series1D pca_project_1d(const Track2D& track, double dt);

/// Zero mean, unit population stddev. Throws Error(Degenerate) for a constant
/// series.
Series1D standardize(const Series1D& s);

/// Least-squares sinusoid started from the best DFT-bin candidate.
SinusoidFit fit_sinusoid(const Series1D& s);

/// Mean squared difference between the sinusoid sampled at i * dt and s.
double sinusoid_mse(const SinusoidFit& fit, const Series1D& s);

struct LabeledSeries {
  int track_id = 0;
  Series1D series;  // standardised
};

struct InlierSet {
  int count = 0;
  std::vector<int> ids;
};

/// Series whose MSE against the candidate sinusoid is below mse_thresh.
InlierSet inlier_count(const SinusoidFit& candidate, const std::vector<LabeledSeries>& all,
                       double mse_thresh = 0.75);

struct RoiConfig {
  double min_stddev_px = 0.7;
  double mse_thresh = 0.75;
  int workers = 1;
};

struct RoiTrackFit {
  int track_id = 0;
  double stddev_px = 0.0;
  SinusoidFit fit;
  int inliers = 0;
  double score = 0.0;  // inliers + stddev_px
};

struct RoiResult {
  int best_track_id = 0;
  std::vector<int> inlier_ids;
  double period_s = 0.0;  // 1 / median frequency over the inliers
  std::vector<RoiTrackFit> fits;
};

/// Exhaustive consensus over every track passing the stddev filter. Throws
/// Error(NoViableTrack) when none survive.
RoiResult discover_roi(const TrackSet& ts, const RoiConfig& cfg = {});

}  // namespace vsysid
