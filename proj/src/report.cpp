#include "vsysid/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "vsysid/error.hpp"
#include "vsysid/serialize.hpp"

namespace vsysid {

namespace {

double relative_pct(double estimate, double truth) {
  return 100.0 * std::abs(estimate - truth) / std::abs(truth);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::filesystem::path> files_with_suffix(const std::filesystem::path& dir,
                                                     std::string_view suffix) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && ends_with(entry.path().filename().string(), suffix)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Summary> summarize_optional(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  return summarize(values);
}

}  // namespace

const TrackFit* RunReport::find_fit(int track_id) const {
  for (const auto& f : fits) {
    if (f.track.id == track_id) return &f;
  }
  return nullptr;
}

ParameterErrors parameter_errors(const GroundTruth& truth, const FitResult& fit, int selected_id) {
  ParameterErrors e;
  e.selected_object = std::find(truth.object_track_ids.begin(), truth.object_track_ids.end(),
                                selected_id) != truth.object_track_ids.end();
  const Eigen::Matrix3d r_true = rotation_matrix(truth.extrinsics.pitch, truth.extrinsics.yaw);
  const Eigen::Matrix3d r_est = rotation_matrix(fit.extrinsics.pitch, fit.extrinsics.yaw);
  e.camera_angle_deg = rotation_angle_between(r_true, r_est) * 180.0 / std::numbers::pi;
  if (fit.theta.eta.size() != truth.theta.eta.size()) return e;
  switch (truth.model.kind) {
    case ModelKind::BouncingBall: {
      e.restitution_pct = relative_pct(fit.theta.eta[ball::kRestitution], truth.theta.eta[ball::kRestitution]);
      const double h_true = truth.theta.p0.y() - truth.theta.eta[ball::kFloorY];
      const double h_est = fit.theta.p0.y() - fit.theta.eta[ball::kFloorY];
      e.height_pct = relative_pct(h_est, h_true);
      break;
    }
    case ModelKind::ArchimedesSpiral:
      e.omega_pct = relative_pct(fit.theta.eta[spiral::kOmega], truth.theta.eta[spiral::kOmega]);
      break;
    case ModelKind::Sinusoid1D:
      e.frequency_pct =
          relative_pct(fit.theta.eta[sinusoid::kFrequency], truth.theta.eta[sinusoid::kFrequency]);
      break;
  }
  return e;
}

RunReport run_pipeline(const TrackSet& ts, const PipelineConfig& cfg, const std::string& scene_id,
                       const GroundTruth* truth) {
  const auto start = std::chrono::steady_clock::now();
  validate(ts);
  cfg.fit.validate();
  validate_intrinsics(cfg.intrinsics);

  RunReport report;
  report.scene_id = scene_id;
  report.config = cfg;
  report.frame_rate = ts.frame_rate;
  report.image_size = ts.image_size;
  report.tracks_total = static_cast<int>(ts.tracks.size());

  const TrackSet filtered = filter_tracks(ts, cfg.min_len_frac, cfg.min_stddev_px);
  report.tracks_filtered = static_cast<int>(filtered.tracks.size());
  std::vector<const Track2D*> candidates;
  for (const auto& t : filtered.tracks) {
    if (static_cast<int>(t.lifetime()) >= cfg.fit.t0) candidates.push_back(&t);
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoViableTrack,
                "no track survives filtering (" + std::to_string(report.tracks_total) + " tracks, " +
                    std::to_string(report.tracks_filtered) + " after filters, none with at least t0 = " +
                    std::to_string(cfg.fit.t0) + " frames); relax --min-len-frac or --min-stddev");
  }

  FitContext ctx;
  ctx.model = cfg.model;
  ctx.intrinsics = cfg.intrinsics;
  ctx.fps = ts.frame_rate;
  ctx.penalty_px = ts.image_size.diagonal();

  report.fits.resize(candidates.size());
  detail::parallel_for(candidates.size(), cfg.workers, [&](std::size_t i) {
    report.fits[i].track = *candidates[i];
    report.fits[i].fit = fit_track(*candidates[i], ctx, cfg.fit);
  });

  for (const auto& f : report.fits) report.scores.push_back(selection_score(f.track, f.fit, cfg.entropy_weight));
  report.selected_track_id = select_best(report.scores);
  sort_by_score(report.scores);

  const TrackFit* chosen = report.find_fit(report.selected_track_id);
  report.selected = chosen->fit;
  report.prediction = predict_future(chosen->fit, chosen->track, ctx);
  if (truth != nullptr) report.errors = parameter_errors(*truth, report.selected, report.selected_track_id);
  report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.ci95 = 1.96 * std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  }
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  s.median = m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
  return s;
}

EvalSummary evaluate(const std::vector<RunReport>& reports, const std::vector<GroundTruth>& truths) {
  std::map<std::string, const GroundTruth*> truth_by_id;
  for (const auto& t : truths) truth_by_id[t.scene_id] = &t;

  struct Columns {
    int scenes = 0;
    int selected = 0;
    std::vector<double> restitution, height, angle, omega, frequency;
  };
  Columns all, with, without;
  std::map<std::string, const RunReport*> curriculum_runs, full_runs;

  for (const auto& r : reports) {
    (r.config.fit.curriculum ? curriculum_runs : full_runs)[r.scene_id] = &r;
    if (!r.config.fit.curriculum) continue;
    auto it = truth_by_id.find(r.scene_id);
    if (it == truth_by_id.end()) {
      throw Error(ErrorCode::Input, "no ground truth for report of scene '" + r.scene_id + "'");
    }
    const GroundTruth& truth = *it->second;
    const ParameterErrors e = parameter_errors(truth, r.selected, r.selected_track_id);
    for (Columns* c : {&all, truth.distractor_track_ids.empty() ? &without : &with}) {
      ++c->scenes;
      c->selected += e.selected_object ? 1 : 0;
      c->angle.push_back(e.camera_angle_deg);
      if (e.restitution_pct) c->restitution.push_back(*e.restitution_pct);
      if (e.height_pct) c->height.push_back(*e.height_pct);
      if (e.omega_pct) c->omega.push_back(*e.omega_pct);
      if (e.frequency_pct) c->frequency.push_back(*e.frequency_pct);
    }
  }

  EvalSummary out;
  auto group = [](const std::string& name, const Columns& c) {
    EvalGroup g;
    g.name = name;
    g.scenes = c.scenes;
    g.selected_object = c.selected;
    g.restitution_pct = summarize_optional(c.restitution);
    g.height_pct = summarize_optional(c.height);
    g.camera_angle_deg = summarize_optional(c.angle);
    g.omega_pct = summarize_optional(c.omega);
    g.frequency_pct = summarize_optional(c.frequency);
    return g;
  };
  out.groups = {group("all", all), group("with_distractors", with), group("without_distractors", without)};

  Ablation ablation;
  for (const auto& [id, full] : full_runs) {
    auto cur = curriculum_runs.find(id);
    if (cur == curriculum_runs.end()) continue;
    const RunReport& c = *cur->second;
    // Compare the same track: the one the curriculum run selected.
    const TrackFit* same = full->find_fit(c.selected_track_id);
    const double full_ll = same != nullptr ? same->fit.mean_loglik : full->selected.mean_loglik;
    ablation.scenes.push_back({id, c.selected.mean_loglik, full_ll});
    if (c.selected.mean_loglik > full_ll) ++ablation.curriculum_better;
  }
  if (!ablation.scenes.empty()) out.ablation = std::move(ablation);
  return out;
}

EvalSummary evaluate_dirs(const std::filesystem::path& reports_dir, const std::filesystem::path& truths_dir) {
  std::vector<RunReport> reports;
  for (const auto& p : files_with_suffix(reports_dir, ".report.json")) {
    reports.push_back(from_json<RunReport>(parse_json(read_text_file(p), p.string())));
  }
  std::vector<GroundTruth> truths;
  for (const auto& p : files_with_suffix(truths_dir, ".truth.json")) {
    truths.push_back(from_json<GroundTruth>(parse_json(read_text_file(p), p.string())));
  }
  if (reports.empty()) throw Error(ErrorCode::Input, "no *.report.json files in " + reports_dir.string());
  return evaluate(reports, truths);
}

std::string format_eval_table(const EvalSummary& summary) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  auto cell = [&os](const std::optional<Summary>& s) {
    std::ostringstream c;
    c << std::fixed << std::setprecision(2);
    if (s) {
      c << s->mean << " +- " << s->ci95 << " (med " << s->median << ")";
    } else {
      c << "-";
    }
    os << std::setw(28) << c.str();
  };
  os << std::left << std::setw(22) << "group" << std::right << std::setw(8) << "scenes" << std::setw(10)
     << "selected" << std::setw(28) << "restitution %" << std::setw(28) << "height %" << std::setw(28)
     << "camera angle deg" << std::setw(28) << "omega %" << std::setw(28) << "frequency %" << "\n";
  for (const auto& g : summary.groups) {
    os << std::left << std::setw(22) << g.name << std::right << std::setw(8) << g.scenes << std::setw(10)
       << g.selected_object;
    cell(g.restitution_pct);
    cell(g.height_pct);
    cell(g.camera_angle_deg);
    cell(g.omega_pct);
    cell(g.frequency_pct);
    os << "\n";
  }
  if (summary.ablation) {
    os << "curriculum vs full sequence: curriculum higher mean log-likelihood on "
       << summary.ablation->curriculum_better << "/" << summary.ablation->scenes.size() << " scenes\n";
  }
  return os.str();
}

std::vector<PseudoLabel> export_labels(const RunReport& report, const std::filesystem::path& frames_dir) {
  const TrackFit* chosen = report.find_fit(report.selected_track_id);
  if (chosen == nullptr) {
    throw Error(ErrorCode::Schema, "report has no fit for selected track " +
                                       std::to_string(report.selected_track_id));
  }
  std::vector<std::filesystem::path> frames;
  if (!frames_dir.empty()) frames = list_pgm_files(frames_dir);
  const Track2D& t = chosen->track;
  if (!frames_dir.empty() && static_cast<std::size_t>(t.start_frame) + t.lifetime() > frames.size()) {
    throw Error(ErrorCode::Input, "track " + std::to_string(t.id) + " spans " +
                                      std::to_string(t.start_frame + t.lifetime()) + " frames but " +
                                      frames_dir.string() + " holds " + std::to_string(frames.size()));
  }
  std::vector<PseudoLabel> out;
  out.reserve(t.lifetime());
  for (std::size_t k = 0; k < t.lifetime(); ++k) {
    PseudoLabel l;
    l.frame_index = t.start_frame + static_cast<int>(k);
    l.x = t.points[k].x();
    l.y = t.points[k].y();
    if (!frames.empty()) l.frame = frames[static_cast<std::size_t>(l.frame_index)].filename().string();
    out.push_back(std::move(l));
  }
  return out;
}

}  // namespace vsysid
