#pragma once

#include <vector>

#include "vsysid/fit.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

/// score = mean_loglik + entropy_weight * entropy_px; with the default weight
/// of 1 the score is exactly the sum of the two fields.
struct ScoredTrack {
  int track_id = 0;
  double mean_loglik = 0.0;
  double entropy_px = 0.0;
  double score = 0.0;

  bool operator==(const ScoredTrack&) const = default;
};

ScoredTrack selection_score(const Track2D& track, const FitResult& fit, double entropy_weight = 1.0);

/// Highest score, ties to the lower track id. Throws Error(NoViableTrack) on
/// an empty list.
int select_best(const std::vector<ScoredTrack>& scored);

/// Descending score, ties by ascending id.
void sort_by_score(std::vector<ScoredTrack>& scored);

}  // namespace vsysid
