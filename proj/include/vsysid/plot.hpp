#pragma once

#include <filesystem>
#include <vector>

#include "vsysid/report.hpp"
#include "vsysid/roi.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

/// overlay.svg/csv (observed vs fitted for every fitted track),
/// curriculum.svg/csv (selected track per curriculum stage) and
/// prediction.svg/csv (future RMSE against prefix length). Returns the
/// written files.
std::vector<std::filesystem::path> plot_report(const RunReport& report,
                                               const std::filesystem::path& out_dir);

/// roi.svg/csv (tracks coloured by membership) and series.svg/csv (best
/// track's standardised series with its sinusoid).
std::vector<std::filesystem::path> plot_roi(const RoiResult& roi, const TrackSet& ts,
                                            const std::filesystem::path& out_dir);

}  // namespace vsysid
