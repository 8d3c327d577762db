#include "vsysid/roi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "vsysid/error.hpp"
#include "vsysid/optim.hpp"

namespace vsysid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  phi = std::fmod(phi, kTwoPi);
  return phi < 0.0 ? phi + kTwoPi : phi;
}

SinusoidFit canonical(double amplitude, double frequency, double phase, double offset) {
  if (amplitude < 0.0) {
    amplitude = -amplitude;
    phase += std::numbers::pi;
  }
  return SinusoidFit{amplitude, frequency, wrap_phase(phase), offset, 0.0};
}

/// Best A sin + B cos + c at a fixed frequency, by linear least squares.
SinusoidFit fixed_frequency_fit(const Series1D& s, double frequency) {
  const auto n = static_cast<Eigen::Index>(s.values.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double arg = kTwoPi * frequency * static_cast<double>(i) * s.dt;
    X(i, 0) = std::sin(arg);
    X(i, 1) = std::cos(arg);
    X(i, 2) = 1.0;
    y[i] = s.values[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
  SinusoidFit fit = canonical(std::hypot(beta[0], beta[1]), frequency, std::atan2(beta[1], beta[0]), beta[2]);
  fit.mse = sinusoid_mse(fit, s);
  return fit;
}

}  // namespace

double SinusoidFit::operator()(double t) const {
  return amplitude * std::sin(kTwoPi * frequency * t + phase) + offset;
}

Series1D pca_project_1d(const Track2D& track, double dt) {
  const std::size_t n = track.points.size();
  if (n < 2) {
    throw Error(ErrorCode::Degenerate, "track " + std::to_string(track.id) + " has fewer than 2 points");
  }
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (const auto& p : track.points) mean += p;
  mean /= static_cast<double>(n);
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : track.points) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(n);
  if (!(cov.trace() > 0.0)) {
    throw Error(ErrorCode::Degenerate, "track " + std::to_string(track.id) + " has zero variance");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  Eigen::Vector2d axis = eig.eigenvectors().col(1);  // eigenvalues ascend
  const bool x_dominant = std::abs(axis.x()) > std::abs(axis.y());
  if ((x_dominant ? axis.x() : axis.y()) < 0.0) axis = -axis;

  Series1D out;
  out.dt = dt;
  out.values.reserve(n);
  for (const auto& p : track.points) out.values.push_back(axis.dot(p - mean));
  return out;
}

Series1D standardize(const Series1D& s) {
  if (s.values.empty()) throw Error(ErrorCode::Degenerate, "cannot standardise an empty series");
  const double n = static_cast<double>(s.values.size());
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : s.values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    throw Error(ErrorCode::Degenerate, "cannot standardise a constant series");
  }
  Series1D out{std::vector<double>(s.values.size()), s.dt};
  for (std::size_t i = 0; i < s.values.size(); ++i) out.values[i] = (s.values[i] - mean) / sd;
  return out;
}

double sinusoid_mse(const SinusoidFit& fit, const Series1D& s) {
  if (s.values.empty()) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double r = s.values[i] - fit(static_cast<double>(i) * s.dt);
    ss += r * r;
  }
  return ss / static_cast<double>(s.values.size());
}

SinusoidFit fit_sinusoid(const Series1D& s) {
  const std::size_t n = s.values.size();
  if (n < 8) throw Error(ErrorCode::Input, "sinusoid fit needs at least 8 samples");
  if (!(s.dt > 0.0)) throw Error(ErrorCode::Input, "series dt must be positive");

  const double duration = static_cast<double>(n) * s.dt;
  SinusoidFit best;
  best.mse = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const SinusoidFit cand = fixed_frequency_fit(s, static_cast<double>(k) / duration);
    if (cand.mse < best.mse) best = cand;
  }

  const Objective mse = [&s](const Eigen::VectorXd& x) {
    if (!(x[1] > 0.0)) return std::numeric_limits<double>::infinity();
    return sinusoid_mse(SinusoidFit{x[0], x[1], x[2], x[3], 0.0}, s);
  };
  const Eigen::Vector4d x0(best.amplitude, best.frequency, best.phase, best.offset);
  const BfgsResult r = bfgs_minimize(mse, x0);
  if (!(r.f < best.mse)) return best;
  SinusoidFit refined = canonical(r.x[0], r.x[1], r.x[2], r.x[3]);
  refined.mse = sinusoid_mse(refined, s);
  return refined.mse < best.mse ? refined : best;
}

InlierSet inlier_count(const SinusoidFit& candidate, const std::vector<LabeledSeries>& all,
                       double mse_thresh) {
  InlierSet out;
  for (const auto& ls : all) {
    if (sinusoid_mse(candidate, ls.series) < mse_thresh) out.ids.push_back(ls.track_id);
  }
  out.count = static_cast<int>(out.ids.size());
  return out;
}

RoiResult discover_roi(const TrackSet& ts, const RoiConfig& cfg) {
  if (!(ts.frame_rate > 0.0)) throw Error(ErrorCode::Input, "frame rate must be positive");
  const double dt = 1.0 / ts.frame_rate;

  std::vector<const Track2D*> kept;
  for (const auto& t : ts.tracks) {
    if (t.lifetime() >= 8 && temporal_stddev(t) >= cfg.min_stddev_px) kept.push_back(&t);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::NoViableTrack,
                "no track has temporal stddev >= " + std::to_string(cfg.min_stddev_px) +
                    " px and at least 8 frames; lower --min-stddev");
  }

  std::vector<LabeledSeries> series(kept.size());
  std::vector<RoiTrackFit> fits(kept.size());
  detail::parallel_for(kept.size(), cfg.workers, [&](std::size_t i) {
    series[i] = {kept[i]->id, standardize(pca_project_1d(*kept[i], dt))};
    fits[i].track_id = kept[i]->id;
    fits[i].stddev_px = temporal_stddev(*kept[i]);
    fits[i].fit = fit_sinusoid(series[i].series);
  });

  std::vector<InlierSet> consensus(kept.size());
  detail::parallel_for(kept.size(), cfg.workers, [&](std::size_t i) {
    consensus[i] = inlier_count(fits[i].fit, series, cfg.mse_thresh);
    fits[i].inliers = consensus[i].count;
    fits[i].score = consensus[i].count + fits[i].stddev_px;
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    if (fits[i].score > fits[best].score ||
        (fits[i].score == fits[best].score && fits[i].track_id < fits[best].track_id)) {
      best = i;
    }
  }

  RoiResult out;
  out.best_track_id = fits[best].track_id;
  out.inlier_ids = consensus[best].ids;
  // A candidate whose own fit misses the threshold still anchors its region.
  if (std::find(out.inlier_ids.begin(), out.inlier_ids.end(), out.best_track_id) == out.inlier_ids.end()) {
    out.inlier_ids.push_back(out.best_track_id);
    std::sort(out.inlier_ids.begin(), out.inlier_ids.end());
  }
  std::vector<double> freqs;
  for (const auto& f : fits) {
    if (std::find(out.inlier_ids.begin(), out.inlier_ids.end(), f.track_id) != out.inlier_ids.end()) {
      freqs.push_back(f.fit.frequency);
    }
  }
  std::sort(freqs.begin(), freqs.end());
  const std::size_t m = freqs.size();
  const double median = m % 2 == 1 ? freqs[m / 2] : 0.5 * (freqs[m / 2 - 1] + freqs[m / 2]);
  out.period_s = 1.0 / median;
  out.fits = std::move(fits);
  return out;
}

}  // namespace vsysid
