#include "vsysid/klt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "vsysid/error.hpp"

namespace vsysid {

void KltConfig::validate() const {
  if (grid_rows < 1 || grid_cols < 1) throw Error(ErrorCode::Input, "grid rows and cols must be >= 1");
  if (window < 3 || window % 2 == 0) throw Error(ErrorCode::Input, "window must be odd and >= 3");
  if (pyramid_levels < 1) throw Error(ErrorCode::Input, "pyramid_levels must be >= 1");
  if (max_iters < 1) throw Error(ErrorCode::Input, "max_iters must be >= 1");
  if (!(convergence_eps > 0.0)) throw Error(ErrorCode::Input, "convergence_eps must be positive");
  if (!(max_residual > 0.0)) throw Error(ErrorCode::Input, "max_residual must be positive");
  if (!(min_eigenvalue >= 0.0)) throw Error(ErrorCode::Input, "min_eigenvalue must be >= 0");
}

std::vector<Eigen::Vector2d> grid_keypoints(int width, int height, int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::Input, "grid rows and cols must be >= 1");
  std::vector<Eigen::Vector2d> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  const double cw = static_cast<double>(width) / cols;
  const double ch = static_cast<double>(height) / rows;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) out.emplace_back(cw * (c + 0.5), ch * (r + 0.5));
  }
  return out;
}

double FloatImage::sample(double x, double y) const {
  x = std::clamp(x, 0.0, static_cast<double>(width - 1));
  y = std::clamp(y, 0.0, static_cast<double>(height - 1));
  const int x0 = std::min(static_cast<int>(x), width - 1);
  const int y0 = std::min(static_cast<int>(y), height - 1);
  const int x1 = std::min(x0 + 1, width - 1);
  const int y1 = std::min(y0 + 1, height - 1);
  const double ax = x - x0;
  const double ay = y - y0;
  const double top = (1 - ax) * at(x0, y0) + ax * at(x1, y0);
  const double bottom = (1 - ax) * at(x0, y1) + ax * at(x1, y1);
  return (1 - ay) * top + ay * bottom;
}

FloatImage to_float(const GrayImage& img) {
  FloatImage f{img.width, img.height, std::vector<float>(img.pixels.size())};
  for (std::size_t i = 0; i < img.pixels.size(); ++i) f.data[i] = img.pixels[i] / 255.0f;
  return f;
}

FloatImage downsample(const FloatImage& img) {
  const int w = img.width;
  const int h = img.height;
  auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };
  std::vector<float> blur_x(img.data.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      blur_x[static_cast<std::size_t>(y) * w + x] =
          0.25f * img.at(clampx(x - 1), y) + 0.5f * img.at(x, y) + 0.25f * img.at(clampx(x + 1), y);
    }
  }
  auto bx = [&](int x, int y) { return blur_x[static_cast<std::size_t>(y) * w + x]; };
  FloatImage out{(w + 1) / 2, (h + 1) / 2, {}};
  out.data.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const int sx = 2 * x;
      const int sy = 2 * y;
      out.data[static_cast<std::size_t>(y) * out.width + x] =
          0.25f * bx(sx, clampy(sy - 1)) + 0.5f * bx(sx, sy) + 0.25f * bx(sx, clampy(sy + 1));
    }
  }
  return out;
}

std::vector<FloatImage> build_pyramid(const GrayImage& img, int levels) {
  std::vector<FloatImage> pyr;
  pyr.push_back(to_float(img));
  for (int l = 1; l < levels; ++l) {
    if (pyr.back().width < 2 || pyr.back().height < 2) break;
    pyr.push_back(downsample(pyr.back()));
  }
  return pyr;
}

LkStep track_point(const std::vector<FloatImage>& prev, const std::vector<FloatImage>& next,
                   const Eigen::Vector2d& p, const KltConfig& cfg) {
  const int half = cfg.window / 2;
  const double area = static_cast<double>(cfg.window) * cfg.window;
  const int levels = static_cast<int>(std::min(prev.size(), next.size()));
  std::vector<double> tmpl(static_cast<std::size_t>(cfg.window) * cfg.window);
  std::vector<Eigen::Vector2d> grad(tmpl.size());

  LkStep out;
  out.position = p;
  Eigen::Vector2d d = Eigen::Vector2d::Zero();
  for (int level = levels - 1; level >= 0; --level) {
    const FloatImage& I = prev[static_cast<std::size_t>(level)];
    const FloatImage& J = next[static_cast<std::size_t>(level)];
    const double scale = std::ldexp(1.0, -level);
    const Eigen::Vector2d c = p * scale;

    Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
    std::size_t k = 0;
    for (int wy = -half; wy <= half; ++wy) {
      for (int wx = -half; wx <= half; ++wx, ++k) {
        const double x = c.x() + wx;
        const double y = c.y() + wy;
        tmpl[k] = I.sample(x, y);
        grad[k] = {0.5 * (I.sample(x + 1, y) - I.sample(x - 1, y)),
                   0.5 * (I.sample(x, y + 1) - I.sample(x, y - 1))};
        G += grad[k] * grad[k].transpose();
      }
    }
    G /= area;
    const double min_eig = 0.5 * (G.trace() - std::sqrt(std::pow(G(0, 0) - G(1, 1), 2) + 4 * G(0, 1) * G(0, 1)));
    if (level == 0) out.min_eigenvalue = min_eig;
    if (min_eig < cfg.min_eigenvalue) {
      if (level == 0) return out;
      d *= 2.0;
      continue;
    }
    const Eigen::Matrix2d G_inv = G.inverse();
    for (int it = 0; it < cfg.max_iters; ++it) {
      Eigen::Vector2d b = Eigen::Vector2d::Zero();
      k = 0;
      for (int wy = -half; wy <= half; ++wy) {
        for (int wx = -half; wx <= half; ++wx, ++k) {
          const double diff = tmpl[k] - J.sample(c.x() + d.x() + wx, c.y() + d.y() + wy);
          b += diff * grad[k];
        }
      }
      const Eigen::Vector2d step = G_inv * (b / area);
      d += step;
      if (!d.allFinite()) return out;
      if (step.norm() < cfg.convergence_eps) break;
    }
    if (level > 0) d *= 2.0;
  }

  const FloatImage& I = prev.front();
  const FloatImage& J = next.front();
  double sad = 0.0;
  for (int wy = -half; wy <= half; ++wy) {
    for (int wx = -half; wx <= half; ++wx) {
      sad += std::abs(I.sample(p.x() + wx, p.y() + wy) - J.sample(p.x() + d.x() + wx, p.y() + d.y() + wy));
    }
  }
  out.position = p + d;
  out.residual = 255.0 * sad / area;
  out.ok = out.residual <= cfg.max_residual;
  return out;
}

TrackSet track_sequence(const FrameSequence& seq, const KltConfig& cfg) {
  cfg.validate();
  if (seq.frames.size() < 2) throw Error(ErrorCode::Input, "need at least 2 frames to track");
  if (!(seq.frame_rate > 0.0)) throw Error(ErrorCode::Input, "frame rate must be positive");
  const int w = seq.frames.front().width;
  const int h = seq.frames.front().height;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    if (seq.frames[i].width != w || seq.frames[i].height != h) {
      throw Error(ErrorCode::Input, "frame " + std::to_string(i) + " is " +
                                        std::to_string(seq.frames[i].width) + "x" +
                                        std::to_string(seq.frames[i].height) + ", expected " +
                                        std::to_string(w) + "x" + std::to_string(h));
    }
  }

  TrackSet ts;
  ts.video_length = static_cast<int>(seq.frames.size());
  ts.frame_rate = seq.frame_rate;
  ts.image_size = {w, h};
  const auto seeds = grid_keypoints(w, h, cfg.grid_rows, cfg.grid_cols);
  std::vector<char> alive(seeds.size(), 1);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ts.tracks.push_back(Track2D{static_cast<int>(i), 0, {seeds[i]}});
  }

  auto inside = [w, h](const Eigen::Vector2d& q) {
    return q.x() >= 0.0 && q.y() >= 0.0 && q.x() <= w - 1.0 && q.y() <= h - 1.0;
  };
  std::vector<FloatImage> prev = build_pyramid(seq.frames[0], cfg.pyramid_levels);
  for (std::size_t f = 1; f < seq.frames.size(); ++f) {
    std::vector<FloatImage> next = build_pyramid(seq.frames[f], cfg.pyramid_levels);
    detail::parallel_for(ts.tracks.size(), cfg.workers, [&](std::size_t i) {
      if (!alive[i]) return;
      Track2D& t = ts.tracks[i];
      const LkStep step = track_point(prev, next, t.points.back(), cfg);
      if (step.ok && inside(step.position)) {
        t.points.push_back(step.position);
      } else {
        alive[i] = 0;
      }
    });
    prev = std::move(next);
  }
  return ts;
}

FrameSequence load_frames(const std::filesystem::path& dir, double fps) {
  FrameSequence seq;
  seq.frame_rate = fps;
  for (const auto& path : list_pgm_files(dir)) seq.frames.push_back(read_pgm(path));
  if (seq.frames.empty()) throw Error(ErrorCode::Input, "no .pgm frames found in " + dir.string());
  return seq;
}

}  // namespace vsysid
