// One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "vsysid/corpus.hpp"
#include "vsysid/report.hpp"
#include "vsysid/roi.hpp"
#include "vsysid/serialize.hpp"

namespace fs = std::filesystem;
using namespace vsysid;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return NAN;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

PipelineConfig pipeline_for(const MotionModel& model) {
  PipelineConfig cfg;
  cfg.model = model;
  return cfg;
}

/// Criteria 1, 2 and 3 share the ball corpus.
void ball_corpus_criteria() {
  const auto corpus = ball_corpus(20, 1000);
  std::vector<RunReport> reports;
  std::vector<GroundTruth> truths;
  std::vector<double> eps, height, angle;
  int selected = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const auto& c : corpus) {
    const Scene s = generate_scene(c);
    RunReport r = run_pipeline(s.tracks, pipeline_for(c.model), c.id, &s.truth);
    const ParameterErrors& e = *r.errors;
    eps.push_back(*e.restitution_pct);
    height.push_back(*e.height_pct);
    angle.push_back(e.camera_angle_deg);
    selected += e.selected_object ? 1 : 0;
    truths.push_back(s.truth);
    reports.push_back(std::move(r));
  }
  const double elapsed = seconds_since(start);
  const double me = median(eps), mh = median(height), ma = median(angle);
  verdict(1, me <= 5.0 && mh <= 10.0 && ma <= 10.0 && elapsed <= 600.0,
          fmt("median restitution error %.2f%% (<= 5), height %.2f%% (<= 10), camera angle %.2f deg (<= 10), "
              "runtime %.0f s (<= 600)",
              me, mh, ma, elapsed));
  verdict(2, selected >= 18, fmt("ball track selected in %.0f/20 scenes (>= 18)", selected));

  for (const auto& c : corpus) {
    const Scene s = generate_scene(c);
    PipelineConfig cfg = pipeline_for(c.model);
    cfg.fit.curriculum = false;
    reports.push_back(run_pipeline(s.tracks, cfg, c.id, &s.truth));
  }
  const EvalSummary ev = evaluate(reports, truths);
  const int better = ev.ablation ? ev.ablation->curriculum_better : 0;
  const int n = ev.ablation ? static_cast<int>(ev.ablation->scenes.size()) : 0;
  verdict(3, n == 20 && better >= 16,
          fmt("curriculum mean log-likelihood higher than full-sequence fit on %.0f/%.0f scenes (>= 80%%)", better, n));
}

void spiral_criterion() {
  std::vector<double> omega, rmse;
  for (const auto& c : spiral_corpus(10, 500)) {
    const Scene s = generate_scene(c);
    const RunReport r = run_pipeline(s.tracks, pipeline_for(c.model), c.id, &s.truth);
    omega.push_back(*r.errors->omega_pct);
    rmse.push_back(r.selected.rmse_px);
  }
  const double worst_omega = *std::max_element(omega.begin(), omega.end());
  const double worst_rmse = *std::max_element(rmse.begin(), rmse.end());
  verdict(4, worst_omega <= 3.0 && worst_rmse <= 2.0,
          fmt("worst omega error %.3f%% (<= 3), worst projection RMSE %.3f px (<= 2) over 10 scenes", worst_omega,
              worst_rmse));
}

void breathing_criterion() {
  const auto corpus = breathing_corpus(10, 1000);
  std::vector<double> truth_period, est_period;
  for (const auto& c : corpus) {
    const Scene s = generate_scene(c);
    truth_period.push_back(1.0 / c.true_theta.eta[sinusoid::kFrequency]);
    est_period.push_back(discover_roi(s.tracks).period_s);
  }
  double mean_period = 0.0;
  for (double p : truth_period) mean_period += p;
  mean_period /= static_cast<double>(truth_period.size());
  int wins = 0;
  std::vector<double> rel;
  double mse = 0.0, baseline_mse = 0.0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const double err2 = std::pow(est_period[i] - truth_period[i], 2);
    const double base2 = std::pow(mean_period - truth_period[i], 2);
    mse += err2 / corpus.size();
    baseline_mse += base2 / corpus.size();
    wins += err2 < base2 ? 1 : 0;
    rel.push_back(100.0 * std::abs(est_period[i] - truth_period[i]) / truth_period[i]);
  }
  const double med = median(rel);
  verdict(5, wins == 10 && med <= 2.0,
          fmt("squared period error below the mean-period baseline on %.0f/10 scenes (MSE %.3g vs %.3g s^2), "
              "median period error %.3f%% (<= 2)",
              wins, mse, baseline_mse, med));
}

void property_criterion() {
  const auto start = std::chrono::steady_clock::now();
  const int code = run(VSYSID_PROPERTY_TESTS_PATH);
  const double elapsed = seconds_since(start);
  verdict(6, code == 0 && elapsed < 60.0,
          fmt("property suite exit code %.0f, %.1f s (< 60)", code, elapsed));
}

void prediction_criterion() {
  // Noiseless scenes: the noise floor is pinned at 1 px, so the bound is 2 px.
  constexpr double kFloorPx = 1.0;
  double worst = 0.0;
  int checked = 0;
  for (auto c : ball_corpus(5, 1000, false)) {
    c.noise_px = 0.0;
    const Scene s = generate_scene(c);
    const Track2D& ball = *s.tracks.find(s.truth.object_track_ids.front());
    FitContext ctx;
    ctx.model = c.model;
    ctx.intrinsics = c.intrinsics;
    ctx.fps = c.fps;
    ctx.penalty_px = c.image_size.diagonal();
    const FitResult fit = fit_track(ball, ctx, FitConfig{});
    for (const auto& p : predict_future(fit, ball, ctx)) {
      if (p.prefix_len < 60 || p.future_frames == 0) continue;
      worst = std::max(worst, p.rmse_px);
      ++checked;
    }
  }
  verdict(7, checked > 0 && worst < 2.0 * kFloorPx,
          fmt("worst future RMSE %.3f px (< %.1f) over %.0f prefixes of at least 60 frames", worst, 2.0 * kFloorPx,
              checked));
}

void raster_criterion() {
  const fs::path dir = fs::temp_directory_path() / "vsysid-acceptance-raster";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = VSYSID_CLI_PATH;
  constexpr int kScenes = 10;
  std::vector<double> eps;
  bool ok = run(cli + " gen --preset raster --count " + std::to_string(kScenes) + " --rasterize --out " +
                dir.string()) == 0;
  for (int i = 0; ok && i < kScenes; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "raster-%02d", i);
    const fs::path base = dir / name;
    const std::string tracks = base.string() + ".klt.json";
    const std::string report = base.string() + ".report.json";
    ok = run(cli + " track --frames " + base.string() + ".frames --out " + tracks) == 0 &&
         run(cli + " fit --tracks " + tracks + " --truth " + base.string() + ".truth.json --scene-id " + name +
             " --out " + report) == 0;
    if (!ok) break;
    const RunReport r = from_json<RunReport>(parse_json(read_text_file(report), report));
    eps.push_back(*r.errors->restitution_pct);
  }
  const double med = median(eps);
  verdict(8, ok && med <= 8.0,
          ok ? fmt("median restitution error %.2f%% (<= 8) over %.0f tracked raster scenes", med, kScenes)
             : std::string("command-line pipeline failed"));
  fs::remove_all(dir);
}

/// Runs fn; an exception fails every criterion it was responsible for.
template <class F>
void guarded(std::initializer_list<int> ids, F&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    for (int id : ids) verdict(id, false, std::string("error: ") + e.what());
  }
}

}  // namespace

int main() {
  guarded({1, 2, 3}, ball_corpus_criteria);
  guarded({4}, spiral_criterion);
  guarded({5}, breathing_criterion);
  guarded({6}, property_criterion);
  guarded({7}, prediction_criterion);
  guarded({8}, raster_criterion);
  return failures == 0 ? 0 : 1;
}
