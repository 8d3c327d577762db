#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vsysid {

struct ImageSize {
  int width = 320;
  int height = 240;

  bool operator==(const ImageSize&) const = default;
  double diagonal() const;
};

/// One keypoint's pixel positions over consecutive frames, starting at
/// start_frame. Tracks never have gaps; termination ends them.
struct Track2D {
  int id = 0;
  int start_frame = 0;
  std::vector<Eigen::Vector2d> points;

  std::size_t lifetime() const noexcept { return points.size(); }
  bool operator==(const Track2D& other) const {
    return id == other.id && start_frame == other.start_frame && points == other.points;
  }
};

struct TrackSet {
  std::vector<Track2D> tracks;
  int video_length = 0;
  double frame_rate = 30.0;
  ImageSize image_size;

  bool operator==(const TrackSet&) const = default;
  const Track2D* find(int id) const;
};

/// Throws Error(Schema) naming the offending track and field.
/// `check_bounds` also requires every point to lie inside the image.
void validate(const TrackSet& ts, bool check_bounds = false);

/// Root total variance sqrt(var(x) + var(y)) about the temporal mean,
/// population normalisation.
double temporal_stddev(const Track2D& track);

/// Keeps tracks alive for at least min_len_frac * video_length frames whose
/// temporal stddev is at least min_stddev_px. Order and ids are preserved.
TrackSet filter_tracks(const TrackSet& ts, double min_len_frac = 0.6,
                       double min_stddev_px = 10.0);

std::string tracks_to_json(const TrackSet& ts);
TrackSet tracks_from_json(const std::string& text);
void save_tracks(const TrackSet& ts, const std::filesystem::path& path);
TrackSet load_tracks(const std::filesystem::path& path);

}  // namespace vsysid
