#pragma once

#include <vector>

#include <Eigen/Core>

#include "vsysid/camera.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/optim.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

enum class AlternationOrder { PhysicsFirst, PoseFirst };

struct FitConfig {
  int t0 = 25;         // initial prefix length, frames
  int m = 10;          // frames added per curriculum iteration
  double sigma_px = 10.0;
  double fd_step = 1e-6;
  int bfgs_max_iters = 200;
  double bfgs_grad_tol = 1e-8;
  /// Rounds stop early once one gains less than 1e-9 relative NLL.
  int max_alternations_per_prefix = 10;
  AlternationOrder order = AlternationOrder::PhysicsFirst;
  /// false fits the full track from the initial guess in one stage.
  bool curriculum = true;

  void validate() const;
  BfgsOptions bfgs() const;
};

/// Everything about the observation that is not the track itself.
struct FitContext {
  MotionModel model;
  Intrinsics intrinsics;
  double fps = 30.0;
  /// Residual norm, pixels, charged to a frame that projects behind the camera.
  double penalty_px = ImageSize{}.diagonal();
};

struct CurriculumRecord {
  int prefix_len = 0;
  double mean_loglik = 0.0;  // per-frame, over the prefix
  double rmse_px = 0.0;      // over the prefix
  Theta theta;
  Extrinsics extrinsics;
  /// NLL over the prefix before the stage, then after every physics / pose step.
  std::vector<double> step_nll;
};

struct FitResult {
  Theta theta;
  Extrinsics extrinsics;
  double mean_loglik = 0.0;  // per-frame, over the whole track
  double rmse_px = 0.0;
  std::vector<CurriculumRecord> history;
  bool converged = false;
};

/// Sum of squared pixel residuals over the first prefix_len frames. Frames
/// behind the camera contribute penalty_px^2.
double residual_sum_squares(const Track2D& track, const Theta& theta, const Extrinsics& extr,
                            const FitContext& ctx, std::size_t prefix_len);

/// -sum_t log N(k_obs_t | k_t, sigma^2 I2) over the first prefix_len frames.
/// Never throws for bad parameters; returns +inf when the rollout is invalid.
double neg_log_likelihood(const Track2D& track, const Theta& theta, const Extrinsics& extr,
                          const FitContext& ctx, double sigma_px, std::size_t prefix_len);

double rmse_px(const Track2D& track, const Theta& theta, const Extrinsics& extr,
               const FitContext& ctx, std::size_t begin, std::size_t end);

struct InitialGuess {
  Theta theta;
  Extrinsics extrinsics;
};

/// Zero pose and velocity; p0 on the z = 5 plane under the first keypoint;
/// per-family default physical parameters.
InitialGuess init_theta(const Track2D& track, const MotionModel& model, const Intrinsics& intr);

/// Optimises (pitch, yaw, t) with theta held fixed.
Extrinsics fit_pose_step(const Track2D& track, const Theta& theta, const Extrinsics& extr_init,
                         const FitContext& ctx, const FitConfig& cfg, std::size_t prefix_len);

/// Optimises eta, p0 and the free velocity components with the pose held
/// fixed. The restitution is clamped to [0, 1].
Theta fit_physics_step(const Track2D& track, const Extrinsics& extr, const Theta& theta_init,
                       const FitContext& ctx, const FitConfig& cfg, std::size_t prefix_len);

/// Alternating curriculum fit over prefixes t0, t0 + m, ... up to the full
/// track. Throws Error(Input) for tracks shorter than t0.
FitResult fit_track(const Track2D& track, const FitContext& ctx, const FitConfig& cfg);

struct PredictionPoint {
  int prefix_len = 0;
  double rmse_px = 0.0;
  std::size_t future_frames = 0;  // 0 means the in-sample value was reported
};

/// For each curriculum record, rolls its parameters over the whole track and
/// measures pixel RMSE on frames beyond the prefix.
std::vector<PredictionPoint> predict_future(const FitResult& fit, const Track2D& track,
                                            const FitContext& ctx);

/// Parameter vectors used by the optimiser, exposed for tests.
Eigen::VectorXd pack_physics(const MotionModel& model, const Theta& theta);
Theta unpack_physics(const MotionModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd pack_pose(const Extrinsics& extr);
Extrinsics unpack_pose(const Eigen::VectorXd& x);

}  // namespace vsysid
