#include "vsysid/tracks.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vsysid/error.hpp"
#include "vsysid/serialize.hpp"

namespace vsysid {

double ImageSize::diagonal() const {
  return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

const Track2D* TrackSet::find(int id) const {
  for (const auto& t : tracks) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

void validate(const TrackSet& ts, bool check_bounds) {
  if (ts.video_length < 0) throw Error(ErrorCode::Schema, "video_length must be >= 0");
  if (!(ts.frame_rate > 0.0) || !std::isfinite(ts.frame_rate)) {
    throw Error(ErrorCode::Schema, "frame_rate must be positive");
  }
  if (ts.image_size.width <= 0 || ts.image_size.height <= 0) {
    throw Error(ErrorCode::Schema, "image_size must be positive");
  }
  for (std::size_t i = 0; i < ts.tracks.size(); ++i) {
    const Track2D& t = ts.tracks[i];
    const std::string where = "tracks[" + std::to_string(i) + "] (id " + std::to_string(t.id) + ")";
    if (t.points.empty()) throw Error(ErrorCode::Schema, where + ": points must be non-empty");
    if (t.start_frame < 0) throw Error(ErrorCode::Schema, where + ": start_frame must be >= 0");
    if (static_cast<long long>(t.start_frame) + static_cast<long long>(t.points.size()) >
        ts.video_length) {
      throw Error(ErrorCode::Schema, where + ": track exceeds video_length " +
                                         std::to_string(ts.video_length));
    }
    for (std::size_t k = 0; k < t.points.size(); ++k) {
      const auto& p = t.points[k];
      if (!p.allFinite()) {
        throw Error(ErrorCode::Schema, where + ".points[" + std::to_string(k) + "] is not finite");
      }
      if (check_bounds && (p.x() < 0.0 || p.y() < 0.0 || p.x() > ts.image_size.width ||
                           p.y() > ts.image_size.height)) {
        throw Error(ErrorCode::Schema, where + ".points[" + std::to_string(k) + "] lies outside the image");
      }
    }
  }
}

double temporal_stddev(const Track2D& track) {
  if (track.points.empty()) return 0.0;
  const double n = static_cast<double>(track.points.size());
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : track.points) mean += p;
  mean /= n;
  double ss = 0.0;
  for (const auto& p : track.points) ss += (p - mean).squaredNorm();
  return std::sqrt(ss / n);
}

TrackSet filter_tracks(const TrackSet& ts, double min_len_frac, double min_stddev_px) {
  TrackSet out = ts;
  out.tracks.clear();
  const double min_len = min_len_frac * static_cast<double>(ts.video_length);
  for (const auto& t : ts.tracks) {
    if (static_cast<double>(t.lifetime()) >= min_len && temporal_stddev(t) >= min_stddev_px) {
      out.tracks.push_back(t);
    }
  }
  return out;
}

std::string tracks_to_json(const TrackSet& ts) { return to_json(ts).dump(1); }

TrackSet tracks_from_json(const std::string& text) {
  TrackSet ts = from_json<TrackSet>(parse_json(text, "tracks"));
  validate(ts);
  return ts;
}

void save_tracks(const TrackSet& ts, const std::filesystem::path& path) {
  write_text_file(path, tracks_to_json(ts));
}

TrackSet load_tracks(const std::filesystem::path& path) {
  return tracks_from_json(read_text_file(path));
}

}  // namespace vsysid
