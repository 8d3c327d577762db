#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsysid/vsysid.h"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitNoViableTrack = 3;

/// Carries a library status out of a command.
struct Failure {
  vsysid_status status;
  std::string message;
};

int exit_code(vsysid_status status) {
  if (status == VSYSID_OK) return kExitOk;
  if (status == VSYSID_E_NO_VIABLE_TRACK) return kExitNoViableTrack;
  if (status == VSYSID_E_INTERNAL) return kExitInternal;
  return kExitInput;
}

void check(vsysid_status status) {
  if (status != VSYSID_OK) throw Failure{status, vsysid_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { vsysid_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct TracksDeleter {
  void operator()(vsysid_tracks* t) const { vsysid_tracks_free(t); }
};
using Tracks = std::unique_ptr<vsysid_tracks, TracksDeleter>;

struct ReportDeleter {
  void operator()(vsysid_report* r) const { vsysid_report_free(r); }
};
using Report = std::unique_ptr<vsysid_report, ReportDeleter>;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{VSYSID_E_IO, "cannot open " + path.string()};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{VSYSID_E_IO, "cannot write " + path.string()};
  out << text;
}

Json parse(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    throw Failure{VSYSID_E_PARSE, what + " is not valid JSON"};
  }
}

Tracks load_tracks(const std::string& path) {
  vsysid_tracks* raw = nullptr;
  check(vsysid_tracks_load(path.c_str(), &raw));
  return Tracks(raw);
}

Report load_report(const std::string& path) {
  vsysid_report* raw = nullptr;
  check(vsysid_report_load(path.c_str(), &raw));
  return Report(raw);
}

/// "scene.tracks.json" -> "scene".
std::string scene_stem(const fs::path& tracks_path) {
  std::string name = tracks_path.filename().string();
  for (const std::string suffix : {".tracks.json", ".json"}) {
    if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return name.substr(0, name.size() - suffix.size());
    }
  }
  return name;
}

struct GenOptions {
  std::string config;
  std::string preset;
  int count = 20;
  unsigned long long seed = 1000;
  std::string out_dir;
  bool rasterize = false;
};

void cmd_gen(const GenOptions& o) {
  std::string config_text;
  if (!o.config.empty()) {
    config_text = read_file(o.config);
  } else {
    char* raw = nullptr;
    check(vsysid_corpus_config(o.preset.c_str(), o.count, o.seed, &raw));
    CString cfg(raw);
    config_text = cfg.get();
    write_file(fs::path(o.out_dir) / (o.preset + ".scenes.json"), config_text);
  }
  char* raw = nullptr;
  check(vsysid_generate(config_text.c_str(), o.out_dir.c_str(), o.rasterize ? 1 : 0, &raw));
  CString manifest(raw);
  const Json m = parse(manifest.get(), "manifest");
  std::cout << "generated " << m.size() << " scene(s) in " << o.out_dir << "\n";
}

struct TrackOptions {
  std::string frames_dir;
  double fps = 30.0;
  std::string out;
  int grid_rows = 10;
  int grid_cols = 10;
  int window = 15;
  int levels = 3;
  double max_residual = 12.0;
  int workers = 1;
};

void cmd_track(const TrackOptions& o) {
  const Json klt = {{"grid", {o.grid_rows, o.grid_cols}},
                    {"window", o.window},
                    {"pyramid_levels", o.levels},
                    {"max_residual", o.max_residual},
                    {"workers", o.workers}};
  vsysid_tracks* raw = nullptr;
  check(vsysid_track_frames(o.frames_dir.c_str(), o.fps, klt.dump().c_str(), &raw));
  Tracks tracks(raw);
  check(vsysid_tracks_save(tracks.get(), o.out.c_str()));
  std::cout << "wrote " << vsysid_tracks_count(tracks.get()) << " tracks to " << o.out << "\n";
}

struct FitOptions {
  std::string tracks;
  std::string out;
  std::string truth;
  std::string scene_id;
  std::string model = "ball";
  int t0 = 25;
  int m = 10;
  double sigma_px = 10.0;
  int max_alternations = 10;
  double min_len_frac = 0.6;
  double min_stddev = 10.0;
  double entropy_weight = 1.0;
  int workers = 1;
  std::string curriculum = "on";
  std::string order = "physics-first";
  std::optional<double> fx, fy, cx, cy;
};

void cmd_fit(const FitOptions& o) {
  Tracks tracks = load_tracks(o.tracks);
  std::string truth_text;
  Json intrinsics;
  if (!o.truth.empty()) {
    truth_text = read_file(o.truth);
    const Json truth = parse(truth_text, o.truth);
    if (truth.contains("intrinsics")) intrinsics = truth["intrinsics"];
  }
  if (intrinsics.is_null()) {
    // Principal point defaults to the image centre of the track file.
    const Json ts = parse(read_file(o.tracks), o.tracks);
    const Json size = ts.value("image_size", Json::array({320, 240}));
    intrinsics = {{"fx", 280.0}, {"fy", 280.0}, {"cx", size[0].get<double>() / 2.0}, {"cy", size[1].get<double>() / 2.0}};
  }
  if (o.fx) intrinsics["fx"] = *o.fx;
  if (o.fy) intrinsics["fy"] = *o.fy;
  if (o.cx) intrinsics["cx"] = *o.cx;
  if (o.cy) intrinsics["cy"] = *o.cy;

  const Json pipeline = {{"model", {{"kind", o.model}}},
                         {"intrinsics", intrinsics},
                         {"fit",
                          {{"t0", o.t0},
                           {"m", o.m},
                           {"sigma_px", o.sigma_px},
                           {"max_alternations_per_prefix", o.max_alternations},
                           {"order", o.order},
                           {"curriculum", o.curriculum == "on"}}},
                         {"min_len_frac", o.min_len_frac},
                         {"min_stddev_px", o.min_stddev},
                         {"entropy_weight", o.entropy_weight},
                         {"workers", o.workers}};
  const std::string scene_id = o.scene_id.empty() ? scene_stem(o.tracks) : o.scene_id;
  vsysid_report* raw = nullptr;
  check(vsysid_fit(tracks.get(), pipeline.dump().c_str(), truth_text.empty() ? nullptr : truth_text.c_str(),
                   scene_id.c_str(), &raw));
  Report report(raw);
  char* json_raw = nullptr;
  check(vsysid_report_to_json(report.get(), &json_raw));
  CString json(json_raw);
  const fs::path out = o.out.empty() ? fs::path(o.tracks).parent_path() / (scene_id + ".report.json") : fs::path(o.out);
  write_file(out, json.get());

  const Json r = parse(json.get(), "report");
  std::printf("%s: selected track %d of %d (%d after filters), mean loglik %.4f", scene_id.c_str(),
              r["selected_track_id"].get<int>(), r["tracks_total"].get<int>(), r["tracks_filtered"].get<int>(),
              vsysid_report_mean_loglik(report.get()));
  if (!r["errors"].is_null()) {
    const Json& e = r["errors"];
    std::printf(", camera angle error %.2f deg", e["camera_angle_deg"].get<double>());
    if (!e["restitution_pct"].is_null()) std::printf(", restitution error %.2f%%", e["restitution_pct"].get<double>());
    if (!e["height_pct"].is_null()) std::printf(", height error %.2f%%", e["height_pct"].get<double>());
    if (!e["omega_pct"].is_null()) std::printf(", omega error %.2f%%", e["omega_pct"].get<double>());
  }
  std::printf("\nwrote %s\n", out.string().c_str());
}

struct RoiOptions {
  std::string tracks;
  std::string out;
  double min_stddev = 0.7;
  double mse_thresh = 0.75;
  int workers = 1;
};

void cmd_roi(const RoiOptions& o) {
  Tracks tracks = load_tracks(o.tracks);
  const Json cfg = {{"min_stddev_px", o.min_stddev}, {"mse_thresh", o.mse_thresh}, {"workers", o.workers}};
  char* raw = nullptr;
  check(vsysid_roi(tracks.get(), cfg.dump().c_str(), &raw));
  CString json(raw);
  const fs::path out = o.out.empty() ? fs::path(o.tracks).parent_path() / (scene_stem(o.tracks) + ".roi.json") : fs::path(o.out);
  write_file(out, json.get());
  const Json r = parse(json.get(), "roi result");
  std::printf("best track %d, %zu tracks in region, period %.4f s\nwrote %s\n", r["best"].get<int>(),
              r["inliers"].size(), r["period_s"].get<double>(), out.string().c_str());
}

struct EvalOptions {
  std::string reports;
  std::string truths;
  std::string out;
};

void cmd_eval(const EvalOptions& o) {
  char* json_raw = nullptr;
  char* table_raw = nullptr;
  check(vsysid_eval(o.reports.c_str(), o.truths.empty() ? o.reports.c_str() : o.truths.c_str(), &json_raw, &table_raw));
  CString json(json_raw);
  CString table(table_raw);
  if (!o.out.empty()) write_file(o.out, json.get());
  std::cout << table.get();
}

struct LabelOptions {
  std::string report;
  std::string frames;
  std::string out;
};

void cmd_export_labels(const LabelOptions& o) {
  Report report = load_report(o.report);
  char* raw = nullptr;
  check(vsysid_export_labels(report.get(), o.frames.empty() ? nullptr : o.frames.c_str(), &raw));
  CString json(raw);
  write_file(o.out, json.get());
  std::cout << "wrote " << parse(json.get(), "labels").size() << " labels to " << o.out << "\n";
}

struct PlotOptions {
  std::string report;
  std::string roi;
  std::string tracks;
  std::string out_dir;
};

void cmd_plot(const PlotOptions& o) {
  char* raw = nullptr;
  if (!o.report.empty()) {
    Report report = load_report(o.report);
    check(vsysid_plot_report(report.get(), o.out_dir.c_str(), &raw));
  } else {
    if (o.tracks.empty()) throw Failure{VSYSID_E_INPUT, "--roi needs --tracks"};
    Tracks tracks = load_tracks(o.tracks);
    const std::string roi = read_file(o.roi);
    check(vsysid_plot_roi(roi.c_str(), tracks.get(), o.out_dir.c_str(), &raw));
  }
  CString files(raw);
  for (const auto& f : parse(files.get(), "file list")) std::cout << f.get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physical system identification from 2D keypoint tracks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vsysid_version()));

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic scenes (tracks, ground truth, optional frames)");
  auto* gen_config = gen_cmd->add_option("--config", gen.config, "Scene config JSON (object or array)")->check(CLI::ExistingFile);
  gen_cmd->add_option("--preset", gen.preset, "Built-in corpus instead of a config file")
      ->check(CLI::IsMember({"ball", "ball-clean", "spiral", "breathing", "raster"}))
      ->excludes(gen_config);
  gen_cmd->add_option("--count", gen.count, "Scenes in the preset corpus")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "First scene seed of the preset corpus")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_flag("--rasterize", gen.rasterize, "Also write 8-bit PGM frames");

  TrackOptions trk;
  auto* track_cmd = app.add_subcommand("track", "Track grid keypoints through a directory of PGM frames");
  track_cmd->add_option("--frames", trk.frames_dir, "Directory of P5 PGM frames")->required()->check(CLI::ExistingDirectory);
  track_cmd->add_option("--fps", trk.fps, "Frame rate")->capture_default_str();
  track_cmd->add_option("--out", trk.out, "Output tracks JSON")->required();
  track_cmd->add_option("--grid-rows", trk.grid_rows)->capture_default_str();
  track_cmd->add_option("--grid-cols", trk.grid_cols)->capture_default_str();
  track_cmd->add_option("--window", trk.window, "Odd window size, pixels")->capture_default_str();
  track_cmd->add_option("--levels", trk.levels, "Pyramid levels")->capture_default_str();
  track_cmd->add_option("--max-residual", trk.max_residual, "Termination residual, grey levels")->capture_default_str();
  track_cmd->add_option("--workers", trk.workers)->capture_default_str();

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit every surviving track and select the object of interest");
  fit_cmd->add_option("--tracks", fit.tracks, "Tracks JSON")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--out", fit.out, "Report JSON (default <scene>.report.json beside the tracks)");
  fit_cmd->add_option("--truth", fit.truth, "Ground-truth JSON for parameter errors")->check(CLI::ExistingFile);
  fit_cmd->add_option("--scene-id", fit.scene_id);
  fit_cmd->add_option("--model", fit.model)->check(CLI::IsMember({"ball", "spiral", "sinusoid"}))->capture_default_str();
  fit_cmd->add_option("--t0", fit.t0, "First curriculum prefix, frames")->capture_default_str();
  fit_cmd->add_option("--m", fit.m, "Frames added per curriculum stage")->capture_default_str();
  fit_cmd->add_option("--sigma-px", fit.sigma_px)->capture_default_str();
  fit_cmd->add_option("--max-alternations", fit.max_alternations, "Physics/pose rounds per prefix")->capture_default_str();
  fit_cmd->add_option("--min-len-frac", fit.min_len_frac)->capture_default_str();
  fit_cmd->add_option("--min-stddev", fit.min_stddev, "Minimum temporal stddev, pixels")->capture_default_str();
  fit_cmd->add_option("--entropy-weight", fit.entropy_weight)->capture_default_str();
  fit_cmd->add_option("--workers", fit.workers)->capture_default_str();
  fit_cmd->add_option("--curriculum", fit.curriculum)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  fit_cmd->add_option("--alternation-order", fit.order)
      ->check(CLI::IsMember({"physics-first", "pose-first"}))
      ->capture_default_str();
  fit_cmd->add_option("--fx", fit.fx);
  fit_cmd->add_option("--fy", fit.fy);
  fit_cmd->add_option("--cx", fit.cx);
  fit_cmd->add_option("--cy", fit.cy);

  RoiOptions roi;
  auto* roi_cmd = app.add_subcommand("roi", "Discover the region of periodic 1D motion");
  roi_cmd->add_option("--tracks", roi.tracks, "Tracks JSON")->required()->check(CLI::ExistingFile);
  roi_cmd->add_option("--out", roi.out, "Result JSON (default <scene>.roi.json beside the tracks)");
  roi_cmd->add_option("--min-stddev", roi.min_stddev, "Minimum temporal stddev, pixels")->capture_default_str();
  roi_cmd->add_option("--mse-thresh", roi.mse_thresh)->capture_default_str();
  roi_cmd->add_option("--workers", roi.workers)->capture_default_str();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Aggregate parameter errors over reports");
  eval_cmd->add_option("--reports", ev.reports, "Directory of *.report.json")->required()->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--truths", ev.truths, "Directory of *.truth.json (default: --reports)")->check(CLI::ExistingDirectory);
  eval_cmd->add_option("--out", ev.out, "Summary JSON");

  LabelOptions lab;
  auto* label_cmd = app.add_subcommand("export-labels", "Write the selected track as per-frame keypoint labels");
  label_cmd->add_option("--report", lab.report)->required()->check(CLI::ExistingFile);
  label_cmd->add_option("--frames", lab.frames, "Frames directory to name each label's image")->check(CLI::ExistingDirectory);
  label_cmd->add_option("--out", lab.out)->required();

  PlotOptions plt;
  auto* plot_cmd = app.add_subcommand("plot", "Write SVG and CSV figures for a report or ROI result");
  auto* plot_report = plot_cmd->add_option("--report", plt.report)->check(CLI::ExistingFile);
  plot_cmd->add_option("--roi", plt.roi)->check(CLI::ExistingFile)->excludes(plot_report);
  plot_cmd->add_option("--tracks", plt.tracks, "Tracks JSON (with --roi)")->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", plt.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen_cmd) {
      if (gen.config.empty() && gen.preset.empty()) throw Failure{VSYSID_E_INPUT, "gen needs --config or --preset"};
      cmd_gen(gen);
    } else if (*track_cmd) {
      cmd_track(trk);
    } else if (*fit_cmd) {
      cmd_fit(fit);
    } else if (*roi_cmd) {
      cmd_roi(roi);
    } else if (*eval_cmd) {
      cmd_eval(ev);
    } else if (*label_cmd) {
      cmd_export_labels(lab);
    } else if (*plot_cmd) {
      if (plt.report.empty() && plt.roi.empty()) throw Failure{VSYSID_E_INPUT, "plot needs --report or --roi"};
      cmd_plot(plt);
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s: %s\n", vsysid_status_string(f.status), f.message.c_str());
    return exit_code(f.status);
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
