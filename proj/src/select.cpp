#include "vsysid/select.hpp"

#include <algorithm>
#include <cmath>

#include "vsysid/error.hpp"

namespace vsysid {

namespace {

// NaN scores rank last.
bool ranks_before(const ScoredTrack& a, const ScoredTrack& b) {
  const bool a_nan = std::isnan(a.score);
  const bool b_nan = std::isnan(b.score);
  if (a_nan != b_nan) return b_nan;
  if (!a_nan && a.score != b.score) return a.score > b.score;
  return a.track_id < b.track_id;
}

}  // namespace

ScoredTrack selection_score(const Track2D& track, const FitResult& fit, double entropy_weight) {
  ScoredTrack s;
  s.track_id = track.id;
  s.mean_loglik = fit.mean_loglik;
  s.entropy_px = temporal_stddev(track);
  s.score = entropy_weight == 1.0 ? s.mean_loglik + s.entropy_px
                                  : s.mean_loglik + entropy_weight * s.entropy_px;
  return s;
}

int select_best(const std::vector<ScoredTrack>& scored) {
  if (scored.empty()) {
    throw Error(ErrorCode::NoViableTrack,
                "no candidate tracks to select from; relax --min-len-frac or --min-stddev");
  }
  return std::min_element(scored.begin(), scored.end(), ranks_before)->track_id;
}

void sort_by_score(std::vector<ScoredTrack>& scored) {
  std::sort(scored.begin(), scored.end(), ranks_before);
}

}  // namespace vsysid
