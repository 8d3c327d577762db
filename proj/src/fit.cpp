#include "vsysid/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vsysid/error.hpp"

namespace vsysid {

void FitConfig::validate() const {
  if (t0 < 2) throw Error(ErrorCode::Input, "t0 must be >= 2");
  if (m < 1) throw Error(ErrorCode::Input, "m must be >= 1");
  if (!(sigma_px > 0.0)) throw Error(ErrorCode::Input, "sigma_px must be > 0");
  if (!(fd_step > 0.0)) throw Error(ErrorCode::Input, "fd_step must be > 0");
  if (bfgs_max_iters < 0) throw Error(ErrorCode::Input, "bfgs_max_iters must be >= 0");
  if (max_alternations_per_prefix < 1) {
    throw Error(ErrorCode::Input, "max_alternations_per_prefix must be >= 1");
  }
}

BfgsOptions FitConfig::bfgs() const {
  BfgsOptions o;
  o.max_iters = bfgs_max_iters;
  o.grad_tol = bfgs_grad_tol;
  o.fd_step = fd_step;
  return o;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInitDepth = 5.0;

double sse_from_trajectory(const Track2D& track, const Trajectory3D& traj, const Extrinsics& extr,
                           const FitContext& ctx, std::size_t begin, std::size_t end) {
  const Eigen::Matrix3d r = rotation_matrix(extr.pitch, extr.yaw);
  const Intrinsics& in = ctx.intrinsics;
  const double penalty = ctx.penalty_px * ctx.penalty_px;
  double sse = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const Eigen::Vector3d pc = r * traj.points[i] + extr.t;
    if (!(pc.z() > kMinDepth)) {
      sse += penalty;
      continue;
    }
    const double u = in.fx * pc.x() / pc.z() + in.cx;
    const double v = in.fy * pc.y() / pc.z() + in.cy;
    const double du = u - track.points[i].x();
    const double dv = v - track.points[i].y();
    sse += du * du + dv * dv;
  }
  return sse;
}

void check_prefix(const Track2D& track, std::size_t prefix_len) {
  if (prefix_len > track.lifetime()) {
    throw Error(ErrorCode::Input, "prefix length " + std::to_string(prefix_len) +
                                      " exceeds track lifetime " + std::to_string(track.lifetime()));
  }
}

Theta clamp_theta(const MotionModel& model, Theta th) {
  if (model.kind == ModelKind::BouncingBall) {
    th.eta[ball::kRestitution] = std::clamp(th.eta[ball::kRestitution], 0.0, 1.0);
  }
  return th;
}

}  // namespace

double residual_sum_squares(const Track2D& track, const Theta& theta, const Extrinsics& extr,
                            const FitContext& ctx, std::size_t prefix_len) {
  check_prefix(track, prefix_len);
  if (prefix_len == 0) return 0.0;
  Trajectory3D traj;
  try {
    traj = rollout(ctx.model, theta, prefix_len, 1.0 / ctx.fps);
  } catch (const Error&) {
    return kInf;
  }
  return sse_from_trajectory(track, traj, extr, ctx, 0, prefix_len);
}

double neg_log_likelihood(const Track2D& track, const Theta& theta, const Extrinsics& extr,
                          const FitContext& ctx, double sigma_px, std::size_t prefix_len) {
  const double sse = residual_sum_squares(track, theta, extr, ctx, prefix_len);
  const double var = sigma_px * sigma_px;
  return 0.5 * sse / var +
         static_cast<double>(prefix_len) * std::log(2.0 * std::numbers::pi * var);
}

double rmse_px(const Track2D& track, const Theta& theta, const Extrinsics& extr,
               const FitContext& ctx, std::size_t begin, std::size_t end) {
  check_prefix(track, end);
  if (end <= begin) return 0.0;
  const Trajectory3D traj = rollout(ctx.model, theta, end, 1.0 / ctx.fps);
  return std::sqrt(sse_from_trajectory(track, traj, extr, ctx, begin, end) /
                   static_cast<double>(end - begin));
}

Eigen::VectorXd pack_physics(const MotionModel& model, const Theta& theta) {
  const int ne = model.eta_dim();
  const int nv = model.has_velocity() ? 2 : 0;
  Eigen::VectorXd x(ne + 3 + nv);
  x.head(ne) = theta.eta;
  x.segment<3>(ne) = theta.p0;
  if (nv == 2) x.tail<2>() = theta.v0.head<2>();
  return x;
}

Theta unpack_physics(const MotionModel& model, const Eigen::VectorXd& x) {
  const int ne = model.eta_dim();
  Theta th;
  th.eta = x.head(ne);
  th.p0 = x.segment<3>(ne);
  if (model.has_velocity()) th.v0 = Eigen::Vector3d(x[ne + 3], x[ne + 4], 0.0);
  return clamp_theta(model, th);
}

Eigen::VectorXd pack_pose(const Extrinsics& extr) {
  Eigen::VectorXd x(5);
  x << extr.pitch, extr.yaw, extr.t.x(), extr.t.y(), extr.t.z();
  return x;
}

Extrinsics unpack_pose(const Eigen::VectorXd& x) {
  Extrinsics e;
  e.pitch = x[0];
  e.yaw = x[1];
  e.t = x.tail<3>();
  return e;
}

InitialGuess init_theta(const Track2D& track, const MotionModel& model, const Intrinsics& intr) {
  if (track.points.empty()) throw Error(ErrorCode::Input, "cannot initialise from an empty track");
  InitialGuess g;
  g.theta.p0 = backproject_to_plane(track.points.front(), intr, Extrinsics{}, kInitDepth);
  g.theta.v0.setZero();
  g.theta.eta.resize(model.eta_dim());
  switch (model.kind) {
    case ModelKind::BouncingBall:
      g.theta.eta << 0.8, g.theta.p0.y() - 1.0;
      break;
    case ModelKind::ArchimedesSpiral:
      g.theta.eta << 0.1, 0.01, 0.0, 1.0;
      break;
    case ModelKind::Sinusoid1D:
      g.theta.eta << 1.0, 0.3, 0.0, 0.0;
      break;
  }
  return g;
}

Extrinsics fit_pose_step(const Track2D& track, const Theta& theta, const Extrinsics& extr_init,
                         const FitContext& ctx, const FitConfig& cfg, std::size_t prefix_len) {
  check_prefix(track, prefix_len);
  // theta is fixed, so the rollout is shared by every evaluation
  const Trajectory3D traj = rollout(ctx.model, theta, prefix_len, 1.0 / ctx.fps);
  const double scale = 0.5 / (cfg.sigma_px * cfg.sigma_px);
  const Objective obj = [&](const Eigen::VectorXd& x) {
    return scale * sse_from_trajectory(track, traj, unpack_pose(x), ctx, 0, prefix_len);
  };
  const BfgsResult r = bfgs_minimize(obj, pack_pose(extr_init), cfg.bfgs());
  return unpack_pose(r.x);
}

Theta fit_physics_step(const Track2D& track, const Extrinsics& extr, const Theta& theta_init,
                       const FitContext& ctx, const FitConfig& cfg, std::size_t prefix_len) {
  check_prefix(track, prefix_len);
  const double scale = 0.5 / (cfg.sigma_px * cfg.sigma_px);
  const MotionModel& model = ctx.model;
  const Objective obj = [&](const Eigen::VectorXd& x) {
    return scale * residual_sum_squares(track, unpack_physics(model, x), extr, ctx, prefix_len);
  };
  const Theta start = clamp_theta(model, theta_init);
  const Eigen::VectorXd x0 = pack_physics(model, start);
  BfgsOptions opts = cfg.bfgs();
  const double inf = std::numeric_limits<double>::infinity();
  opts.lower = Eigen::VectorXd::Constant(x0.size(), -inf);
  opts.upper = Eigen::VectorXd::Constant(x0.size(), inf);
  if (model.kind == ModelKind::BouncingBall) {
    opts.lower[ball::kRestitution] = 0.0;
    opts.upper[ball::kRestitution] = 1.0;
  } else if (model.kind == ModelKind::ArchimedesSpiral) {
    opts.lower[spiral::kA] = 0.0;
    opts.lower[spiral::kB] = 0.0;
  }
  const BfgsResult r = bfgs_minimize(obj, x0, opts);
  return unpack_physics(model, r.x);
}

namespace {

std::vector<int> curriculum_schedule(int lifetime, const FitConfig& cfg) {
  std::vector<int> prefixes;
  if (!cfg.curriculum) {
    prefixes.push_back(lifetime);
    return prefixes;
  }
  for (int p = cfg.t0; p < lifetime; p += cfg.m) prefixes.push_back(p);
  prefixes.push_back(lifetime);
  return prefixes;
}

}  // namespace

namespace {

struct PrefixState {
  Theta theta;
  Extrinsics extr;
  double nll = kInf;
  double last_round_gain = kInf;
  std::vector<double> step_nll;
};

PrefixState fit_prefix(const Track2D& track, Theta theta, Extrinsics extr, const FitContext& ctx,
                       const FitConfig& cfg, std::size_t n) {
  PrefixState st;
  st.nll = neg_log_likelihood(track, theta, extr, ctx, cfg.sigma_px, n);
  st.step_nll.push_back(st.nll);
  for (int round = 0; round < cfg.max_alternations_per_prefix; ++round) {
    const double before = st.nll;
    for (int step = 0; step < 2; ++step) {
      const bool physics = (step == 0) == (cfg.order == AlternationOrder::PhysicsFirst);
      if (physics) {
        theta = fit_physics_step(track, extr, theta, ctx, cfg, n);
      } else {
        extr = fit_pose_step(track, theta, extr, ctx, cfg, n);
      }
      st.nll = neg_log_likelihood(track, theta, extr, ctx, cfg.sigma_px, n);
      st.step_nll.push_back(st.nll);
    }
    st.last_round_gain = (before - st.nll) / std::max(1.0, std::abs(before));
    if (st.last_round_gain < 1e-9) break;
  }
  st.theta = std::move(theta);
  st.extr = extr;
  return st;
}

// The spiral objective has a flat collapse at a = b = 0, so the first prefix
// is also started from the other three quadrants of theta0.
std::vector<Theta> first_prefix_starts(const Theta& init, const MotionModel& model) {
  std::vector<Theta> starts{init};
  if (model.kind == ModelKind::ArchimedesSpiral) {
    for (int q = 1; q < 4; ++q) {
      Theta t = init;
      t.eta[spiral::kTheta0] += q * std::numbers::pi / 2.0;
      starts.push_back(std::move(t));
    }
  }
  return starts;
}

// Tilt sign is only weakly observable under perspective; the mirrored pose keeps
// p0 at the same camera-frame position.
Extrinsics mirrored_pose(const Extrinsics& extr, const Eigen::Vector3d& p0) {
  Extrinsics m = extr;
  m.pitch = -extr.pitch;
  m.yaw = -extr.yaw;
  m.t = rotation_matrix(extr.pitch, extr.yaw) * p0 + extr.t - rotation_matrix(m.pitch, m.yaw) * p0;
  return m;
}

}  // namespace

FitResult fit_track(const Track2D& track, const FitContext& ctx, const FitConfig& cfg) {
  cfg.validate();
  const int lifetime = static_cast<int>(track.lifetime());
  if (lifetime < cfg.t0) {
    throw Error(ErrorCode::Input, "track " + std::to_string(track.id) + " has " +
                                      std::to_string(lifetime) + " frames, fewer than t0 = " +
                                      std::to_string(cfg.t0) + "; filter short tracks first");
  }

  const InitialGuess guess = init_theta(track, ctx.model, ctx.intrinsics);
  Theta theta = guess.theta;
  Extrinsics extr = guess.extrinsics;

  FitResult result;
  double last_round_gain = kInf;
  bool first = true;
  for (const int prefix : curriculum_schedule(lifetime, cfg)) {
    const auto n = static_cast<std::size_t>(prefix);
    PrefixState st;
    if (first) {
      for (const Theta& start : first_prefix_starts(theta, ctx.model)) {
        PrefixState cand = fit_prefix(track, start, extr, ctx, cfg, n);
        if (cand.nll < st.nll || st.step_nll.empty()) st = std::move(cand);
      }
      first = false;
    } else {
      st = fit_prefix(track, theta, extr, ctx, cfg, n);
    }
    if (prefix == lifetime) {
      PrefixState alt = fit_prefix(track, st.theta, mirrored_pose(st.extr, st.theta.p0), ctx, cfg, n);
      if (alt.nll < st.nll) {
        st.step_nll.push_back(alt.nll);
        alt.step_nll = std::move(st.step_nll);
        st = std::move(alt);
      }
    }
    theta = st.theta;
    extr = st.extr;
    last_round_gain = st.last_round_gain;

    CurriculumRecord rec;
    rec.prefix_len = prefix;
    rec.step_nll = std::move(st.step_nll);
    rec.theta = theta;
    rec.extrinsics = extr;
    rec.mean_loglik = -st.nll / prefix;
    rec.rmse_px = rmse_px(track, theta, extr, ctx, 0, n);
    result.history.push_back(std::move(rec));
  }

  result.theta = theta;
  result.extrinsics = extr;
  const auto full = static_cast<std::size_t>(lifetime);
  result.mean_loglik = -neg_log_likelihood(track, theta, extr, ctx, cfg.sigma_px, full) / lifetime;
  result.rmse_px = rmse_px(track, theta, extr, ctx, 0, full);
  result.converged = std::isfinite(result.mean_loglik) && last_round_gain < 1e-6;
  return result;
}

std::vector<PredictionPoint> predict_future(const FitResult& fit, const Track2D& track,
                                            const FitContext& ctx) {
  std::vector<PredictionPoint> curve;
  const std::size_t horizon = track.lifetime();
  for (const auto& rec : fit.history) {
    PredictionPoint pt;
    pt.prefix_len = rec.prefix_len;
    const auto begin = static_cast<std::size_t>(rec.prefix_len);
    if (begin < horizon) {
      pt.future_frames = horizon - begin;
      pt.rmse_px = rmse_px(track, rec.theta, rec.extrinsics, ctx, begin, horizon);
    } else {
      pt.rmse_px = rmse_px(track, rec.theta, rec.extrinsics, ctx, 0, horizon);
    }
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace vsysid
