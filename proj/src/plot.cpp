#include "vsysid/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "vsysid/camera.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/error.hpp"
#include "vsysid/serialize.hpp"

namespace vsysid {

namespace {

using Points = std::vector<Eigen::Vector2d>;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string fmt_csv(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
};

/// Maps data coordinates into a panel. flip_y puts larger y at the top, for
/// charts; image panels keep the pixel convention with y down.
struct Axes {
  Rect panel;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool flip_y = false;

  Eigen::Vector2d map(const Eigen::Vector2d& p) const {
    const double u = panel.x + (p.x() - x0) / (x1 - x0) * panel.w;
    const double fy = (p.y() - y0) / (y1 - y0);
    const double v = panel.y + (flip_y ? 1.0 - fy : fy) * panel.h;
    return {u, v};
  }
};

class Svg {
 public:
  Svg(double width, double height) : width_(width), height_(height) {}

  void rect(const Rect& r, const std::string& fill, const std::string& stroke) {
    body_ << "<rect x=\"" << fmt(r.x) << "\" y=\"" << fmt(r.y) << "\" width=\"" << fmt(r.w) << "\" height=\""
          << fmt(r.h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
  }

  void polyline(const Axes& ax, const Points& pts, const std::string& color, double width,
                const std::string& dash = "") {
    if (pts.empty()) return;
    body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << " points=\"";
    for (const auto& p : pts) {
      if (!p.allFinite()) continue;
      const Eigen::Vector2d q = ax.map(p);
      body_ << fmt(q.x()) << "," << fmt(q.y()) << " ";
    }
    body_ << "\"/>\n";
  }

  void dots(const Axes& ax, const Points& pts, const std::string& color, double r) {
    for (const auto& p : pts) {
      if (!p.allFinite()) continue;
      const Eigen::Vector2d q = ax.map(p);
      body_ << "<circle cx=\"" << fmt(q.x()) << "\" cy=\"" << fmt(q.y()) << "\" r=\"" << fmt(r) << "\" fill=\""
            << color << "\"/>\n";
    }
  }

  void text(double x, double y, const std::string& s, double size = 11, const std::string& anchor = "start") {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-family=\"sans-serif\" font-size=\""
          << fmt(size) << "\" text-anchor=\"" << anchor << "\">" << s << "</text>\n";
  }

  std::string str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width_) << "\" height=\"" << fmt(height_)
       << "\" viewBox=\"0 0 " << fmt(width_) << " " << fmt(height_) << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << body_.str() << "</svg>\n";
    return os.str();
  }

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

Axes image_axes(const Rect& panel, const ImageSize& size) {
  return Axes{panel, 0.0, static_cast<double>(size.width), 0.0, static_cast<double>(size.height), false};
}

/// Chart axes with a little headroom, ticks at the ends.
Axes chart_axes(Svg& svg, const Rect& panel, double x0, double x1, double y0, double y1,
                const std::string& xlabel, const std::string& ylabel) {
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  Axes ax{panel, x0, x1, y0 - pad, y1 + pad, true};
  svg.rect(panel, "none", "#444");
  svg.text(panel.x, panel.y + panel.h + 14, fmt(x0), 10);
  svg.text(panel.x + panel.w, panel.y + panel.h + 14, fmt(x1), 10, "end");
  svg.text(panel.x - 4, panel.y + panel.h, fmt(ax.y0), 10, "end");
  svg.text(panel.x - 4, panel.y + 10, fmt(ax.y1), 10, "end");
  svg.text(panel.x + panel.w / 2, panel.y + panel.h + 28, xlabel, 11, "middle");
  svg.text(panel.x, panel.y - 6, ylabel, 11);
  return ax;
}

Points fitted_pixels(const MotionModel& model, const Theta& theta, const Extrinsics& extr,
                     const Intrinsics& intr, std::size_t frames, double fps) {
  Points out(frames, Eigen::Vector2d::Constant(std::numeric_limits<double>::quiet_NaN()));
  try {
    const ProjectedTrajectory pr = project_trajectory(rollout(model, theta, frames, 1.0 / fps), intr, extr);
    for (std::size_t i = 0; i < frames; ++i) {
      if (!pr.behind[i]) out[i] = pr.pixels[i];
    }
  } catch (const Error&) {
    // Parameters outside the model domain draw nothing.
  }
  return out;
}

std::filesystem::path write(const std::filesystem::path& dir, const std::string& name, const std::string& text) {
  const auto path = dir / name;
  write_text_file(path, text);
  return path;
}

}  // namespace

std::vector<std::filesystem::path> plot_report(const RunReport& report, const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  const auto& cfg = report.config;
  const ImageSize size = report.image_size;

  std::ostringstream overlay_csv;
  overlay_csv << "track_id,frame,observed_x,observed_y,fitted_x,fitted_y\n";
  for (const auto& tf : report.fits) {
    const Track2D& t = tf.track;
    const Points fit = fitted_pixels(cfg.model, tf.fit.theta, tf.fit.extrinsics, cfg.intrinsics, t.lifetime(),
                                     report.frame_rate);
    for (std::size_t k = 0; k < t.lifetime(); ++k) {
      overlay_csv << t.id << "," << t.start_frame + static_cast<int>(k) << "," << fmt_csv(t.points[k].x()) << ","
                  << fmt_csv(t.points[k].y()) << "," << fmt_csv(fit[k].x()) << "," << fmt_csv(fit[k].y()) << "\n";
    }
    Svg svg(size.width + 20.0, size.height + 50.0);
    const Rect panel{10, 30, static_cast<double>(size.width), static_cast<double>(size.height)};
    svg.rect(panel, "#f4f4f4", "#444");
    const Axes ax = image_axes(panel, size);
    svg.polyline(ax, t.points, "#1f77b4", 1.5);
    svg.polyline(ax, fit, "#d62728", 1.5, "4,2");
    const ScoredTrack* s = nullptr;
    for (const auto& st : report.scores) {
      if (st.track_id == t.id) s = &st;
    }
    std::string title = "track " + std::to_string(t.id);
    if (t.id == report.selected_track_id) title += " (selected)";
    if (s != nullptr) {
      title += "  loglik " + fmt(s->mean_loglik) + "  entropy " + fmt(s->entropy_px) + "  sum " + fmt(s->score);
    }
    svg.text(10, 18, title);
    written.push_back(write(out_dir, "overlay_track" + std::to_string(t.id) + ".svg", svg.str()));
  }
  written.push_back(write(out_dir, "overlay.csv", overlay_csv.str()));

  const TrackFit* chosen = report.find_fit(report.selected_track_id);
  if (chosen != nullptr && !chosen->fit.history.empty()) {
    const Track2D& t = chosen->track;
    const auto& hist = chosen->fit.history;
    // At most 12 panels, evenly spread over the curriculum and ending on the last stage.
    std::vector<std::size_t> picks;
    const std::size_t want = std::min<std::size_t>(12, hist.size());
    for (std::size_t i = 0; i < want; ++i) {
      picks.push_back(want == 1 ? hist.size() - 1 : i * (hist.size() - 1) / (want - 1));
    }
    const int cols = 4;
    const int rows = static_cast<int>((picks.size() + cols - 1) / cols);
    const double pw = size.width * 0.6;
    const double ph = size.height * 0.6;
    Svg svg(cols * (pw + 20) + 10, rows * (ph + 40) + 10);
    std::ostringstream csv;
    csv << "prefix_len,frame,observed_x,observed_y,fitted_x,fitted_y\n";
    for (std::size_t p = 0; p < picks.size(); ++p) {
      const CurriculumRecord& rec = hist[picks[p]];
      const Rect panel{10 + (p % cols) * (pw + 20), 30 + (p / cols) * (ph + 40), pw, ph};
      svg.rect(panel, "#f4f4f4", "#444");
      const Axes ax = image_axes(panel, size);
      const auto prefix = std::min<std::size_t>(static_cast<std::size_t>(rec.prefix_len), t.lifetime());
      const Points fit = fitted_pixels(cfg.model, rec.theta, rec.extrinsics, cfg.intrinsics, t.lifetime(),
                                       report.frame_rate);
      svg.polyline(ax, t.points, "#bbbbbb", 1.0);
      svg.polyline(ax, Points(t.points.begin(), t.points.begin() + static_cast<std::ptrdiff_t>(prefix)),
                   "#1f77b4", 1.5);
      svg.polyline(ax, fit, "#d62728", 1.2, "4,2");
      svg.text(panel.x, panel.y - 6, "prefix " + std::to_string(rec.prefix_len) + "  rmse " + fmt(rec.rmse_px), 10);
      for (std::size_t k = 0; k < t.lifetime(); ++k) {
        csv << rec.prefix_len << "," << t.start_frame + static_cast<int>(k) << "," << fmt_csv(t.points[k].x())
            << "," << fmt_csv(t.points[k].y()) << "," << fmt_csv(fit[k].x()) << "," << fmt_csv(fit[k].y())
            << "\n";
      }
    }
    written.push_back(write(out_dir, "curriculum.svg", svg.str()));
    written.push_back(write(out_dir, "curriculum.csv", csv.str()));
  }

  if (!report.prediction.empty()) {
    std::ostringstream csv;
    csv << "prefix_len,rmse_px,future_frames\n";
    Points curve;
    double ymax = 0.0;
    for (const auto& p : report.prediction) {
      csv << p.prefix_len << "," << fmt_csv(p.rmse_px) << "," << p.future_frames << "\n";
      if (std::isfinite(p.rmse_px)) {
        curve.emplace_back(p.prefix_len, p.rmse_px);
        ymax = std::max(ymax, p.rmse_px);
      }
    }
    Svg svg(520, 340);
    const Rect panel{70, 30, 420, 250};
    const double x0 = report.prediction.front().prefix_len;
    const double x1 = report.prediction.back().prefix_len;
    const Axes ax = chart_axes(svg, panel, x0, x1, 0.0, ymax, "prefix length (frames)", "future RMSE (px)");
    svg.polyline(ax, curve, "#d62728", 1.5);
    svg.dots(ax, curve, "#d62728", 2.5);
    written.push_back(write(out_dir, "prediction.svg", svg.str()));
    written.push_back(write(out_dir, "prediction.csv", csv.str()));
  }
  return written;
}

std::vector<std::filesystem::path> plot_roi(const RoiResult& roi, const TrackSet& ts,
                                            const std::filesystem::path& out_dir) {
  std::vector<std::filesystem::path> written;
  const auto member = [&roi](int id) {
    return std::find(roi.inlier_ids.begin(), roi.inlier_ids.end(), id) != roi.inlier_ids.end();
  };

  Svg svg(ts.image_size.width + 20.0, ts.image_size.height + 50.0);
  const Rect panel{10, 30, static_cast<double>(ts.image_size.width), static_cast<double>(ts.image_size.height)};
  svg.rect(panel, "#f4f4f4", "#444");
  const Axes ax = image_axes(panel, ts.image_size);
  std::ostringstream csv;
  csv << "track_id,stddev_px,A,f,phi,c,mse,inliers,score,in_roi\n";
  for (const auto& t : ts.tracks) {
    if (!member(t.id)) svg.polyline(ax, t.points, "#999999", 0.8);
  }
  for (const auto& t : ts.tracks) {
    if (member(t.id)) svg.polyline(ax, t.points, t.id == roi.best_track_id ? "#d62728" : "#ff7f0e", 1.5);
  }
  svg.text(10, 18, "ROI: " + std::to_string(roi.inlier_ids.size()) + " tracks, period " + fmt(roi.period_s) + " s");
  for (const auto& f : roi.fits) {
    csv << f.track_id << "," << fmt_csv(f.stddev_px) << "," << fmt_csv(f.fit.amplitude) << ","
        << fmt_csv(f.fit.frequency) << "," << fmt_csv(f.fit.phase) << "," << fmt_csv(f.fit.offset) << ","
        << fmt_csv(f.fit.mse) << "," << f.inliers << "," << fmt_csv(f.score) << "," << (member(f.track_id) ? 1 : 0)
        << "\n";
  }
  written.push_back(write(out_dir, "roi.svg", svg.str()));
  written.push_back(write(out_dir, "roi.csv", csv.str()));

  const Track2D* best = ts.find(roi.best_track_id);
  const RoiTrackFit* best_fit = nullptr;
  for (const auto& f : roi.fits) {
    if (f.track_id == roi.best_track_id) best_fit = &f;
  }
  if (best != nullptr && best_fit != nullptr && best->lifetime() >= 2) {
    const Series1D s = standardize(pca_project_1d(*best, 1.0 / ts.frame_rate));
    Points observed;
    Points model;
    std::ostringstream scsv;
    scsv << "t,standardized,fitted\n";
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double t = static_cast<double>(i) * s.dt;
      observed.emplace_back(t, s.values[i]);
      model.emplace_back(t, best_fit->fit(t));
      lo = std::min({lo, s.values[i], model.back().y()});
      hi = std::max({hi, s.values[i], model.back().y()});
      scsv << fmt_csv(t) << "," << fmt_csv(s.values[i]) << "," << fmt_csv(model.back().y()) << "\n";
    }
    Svg chart(620, 300);
    const Rect cp{60, 30, 540, 220};
    const Axes cax = chart_axes(chart, cp, 0.0, observed.back().x(), lo, hi, "time (s)",
                                "track " + std::to_string(best->id) + " standardised, f = " +
                                    fmt(best_fit->fit.frequency) + " Hz");
    chart.dots(cax, observed, "#1f77b4", 1.5);
    chart.polyline(cax, model, "#d62728", 1.5);
    written.push_back(write(out_dir, "series.svg", chart.str()));
    written.push_back(write(out_dir, "series.csv", scsv.str()));
  }
  return written;
}

}  // namespace vsysid
