#include "vsysid/vsysid.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "vsysid/corpus.hpp"
#include "vsysid/error.hpp"
#include "vsysid/klt.hpp"
#include "vsysid/plot.hpp"
#include "vsysid/report.hpp"
#include "vsysid/roi.hpp"
#include "vsysid/scene.hpp"
#include "vsysid/serialize.hpp"
#include "vsysid/tracks.hpp"

struct vsysid_tracks {
  vsysid::TrackSet value;
};

struct vsysid_report {
  vsysid::RunReport value;
};

namespace {

thread_local std::string g_last_error;

vsysid_status status_of(vsysid::ErrorCode code) {
  using vsysid::ErrorCode;
  switch (code) {
    case ErrorCode::Domain: return VSYSID_E_DOMAIN;
    case ErrorCode::BehindCamera: return VSYSID_E_BEHIND_CAMERA;
    case ErrorCode::NoIntersection: return VSYSID_E_NO_INTERSECTION;
    case ErrorCode::Generation: return VSYSID_E_GENERATION;
    case ErrorCode::Parse: return VSYSID_E_PARSE;
    case ErrorCode::Schema: return VSYSID_E_SCHEMA;
    case ErrorCode::Degenerate: return VSYSID_E_DEGENERATE;
    case ErrorCode::NoViableTrack: return VSYSID_E_NO_VIABLE_TRACK;
    case ErrorCode::Input: return VSYSID_E_INPUT;
    case ErrorCode::Io: return VSYSID_E_IO;
  }
  return VSYSID_E_INTERNAL;
}

vsysid_status fail(vsysid_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

/// Runs fn, translating exceptions into status codes.
template <class F>
vsysid_status guarded(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return VSYSID_OK;
  } catch (const vsysid::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VSYSID_E_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(VSYSID_E_IO, e.what());
  } catch (const std::exception& e) {
    return fail(VSYSID_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw vsysid::Error(vsysid::ErrorCode::Input, what);
}

vsysid::Json paths_json(const std::vector<std::filesystem::path>& paths) {
  vsysid::Json a = vsysid::Json::array();
  for (const auto& p : paths) a.push_back(p.string());
  return a;
}

}  // namespace

extern "C" {

const char* vsysid_version(void) { return "0.1.0"; }

const char* vsysid_status_string(vsysid_status status) {
  switch (status) {
    case VSYSID_OK: return "ok";
    case VSYSID_E_DOMAIN: return "domain error";
    case VSYSID_E_BEHIND_CAMERA: return "point behind camera";
    case VSYSID_E_NO_INTERSECTION: return "ray does not meet plane";
    case VSYSID_E_GENERATION: return "scene generation error";
    case VSYSID_E_PARSE: return "parse error";
    case VSYSID_E_SCHEMA: return "schema error";
    case VSYSID_E_DEGENERATE: return "degenerate input";
    case VSYSID_E_NO_VIABLE_TRACK: return "no viable track";
    case VSYSID_E_INPUT: return "input error";
    case VSYSID_E_IO: return "i/o error";
    case VSYSID_E_INVALID_ARGUMENT: return "invalid argument";
    case VSYSID_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* vsysid_last_error(void) { return g_last_error.c_str(); }

void vsysid_string_free(char* s) { std::free(s); }

vsysid_status vsysid_tracks_load(const char* path, vsysid_tracks** out) {
  if (path == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "path and out are required");
  *out = nullptr;
  return guarded([&] { *out = new vsysid_tracks{vsysid::load_tracks(path)}; });
}

vsysid_status vsysid_tracks_parse(const char* json, vsysid_tracks** out) {
  if (json == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "json and out are required");
  *out = nullptr;
  return guarded([&] { *out = new vsysid_tracks{vsysid::tracks_from_json(json)}; });
}

vsysid_status vsysid_tracks_save(const vsysid_tracks* tracks, const char* path) {
  if (tracks == nullptr || path == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "tracks and path are required");
  return guarded([&] { vsysid::save_tracks(tracks->value, path); });
}

vsysid_status vsysid_tracks_to_json(const vsysid_tracks* tracks, char** out) {
  if (tracks == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "tracks and out are required");
  *out = nullptr;
  return guarded([&] { *out = dup(vsysid::tracks_to_json(tracks->value)); });
}

size_t vsysid_tracks_count(const vsysid_tracks* tracks) { return tracks == nullptr ? 0 : tracks->value.tracks.size(); }

vsysid_status vsysid_tracks_filter(const vsysid_tracks* tracks, double min_len_frac, double min_stddev_px,
                                   vsysid_tracks** out) {
  if (tracks == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "tracks and out are required");
  *out = nullptr;
  return guarded([&] {
    *out = new vsysid_tracks{vsysid::filter_tracks(tracks->value, min_len_frac, min_stddev_px)};
  });
}

void vsysid_tracks_free(vsysid_tracks* tracks) { delete tracks; }

vsysid_status vsysid_corpus_config(const char* preset, int count, unsigned long long seed, char** out_json) {
  if (preset == nullptr || out_json == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "preset and out_json are required");
  }
  *out_json = nullptr;
  return guarded([&] {
    vsysid::Json a = vsysid::Json::array();
    for (const auto& c : vsysid::make_corpus(preset, count, seed)) a.push_back(vsysid::to_json(c));
    *out_json = dup(a.dump(1));
  });
}

vsysid_status vsysid_generate(const char* config_json, const char* out_dir, int rasterize, char** out_manifest) {
  if (config_json == nullptr || out_dir == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "config_json and out_dir are required");
  }
  if (out_manifest != nullptr) *out_manifest = nullptr;
  return guarded([&] {
    const auto configs = vsysid::scene_configs_from_json(vsysid::parse_json(config_json, "scene config"));
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    vsysid::Json manifest = vsysid::Json::array();
    for (const auto& cfg : configs) {
      const vsysid::Scene scene = vsysid::generate_scene(cfg);
      const auto tracks_path = dir / (cfg.id + ".tracks.json");
      const auto truth_path = dir / (cfg.id + ".truth.json");
      vsysid::save_tracks(scene.tracks, tracks_path);
      vsysid::write_text_file(truth_path, vsysid::to_json(scene.truth).dump(1));
      vsysid::Json entry = {{"id", cfg.id}, {"tracks", tracks_path.string()}, {"truth", truth_path.string()}};
      if (rasterize != 0) {
        const auto frames_dir = dir / (cfg.id + ".frames");
        std::filesystem::create_directories(frames_dir);
        const auto frames = vsysid::rasterize_scene(cfg);
        for (std::size_t i = 0; i < frames.size(); ++i) {
          char name[32];
          std::snprintf(name, sizeof name, "frame_%04zu.pgm", i);
          vsysid::write_pgm(frames[i], frames_dir / name);
        }
        entry["frames"] = frames_dir.string();
      }
      manifest.push_back(entry);
    }
    if (out_manifest != nullptr) *out_manifest = dup(manifest.dump(1));
  });
}

vsysid_status vsysid_track_frames(const char* frames_dir, double fps, const char* klt_json, vsysid_tracks** out) {
  if (frames_dir == nullptr || out == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "frames_dir and out are required");
  }
  *out = nullptr;
  return guarded([&] {
    vsysid::KltConfig cfg;
    if (klt_json != nullptr) cfg = vsysid::from_json<vsysid::KltConfig>(vsysid::parse_json(klt_json, "klt config"));
    *out = new vsysid_tracks{vsysid::track_sequence(vsysid::load_frames(frames_dir, fps), cfg)};
  });
}

vsysid_status vsysid_fit(const vsysid_tracks* tracks, const char* pipeline_json, const char* truth_json,
                         const char* scene_id, vsysid_report** out) {
  if (tracks == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "tracks and out are required");
  *out = nullptr;
  return guarded([&] {
    vsysid::PipelineConfig cfg;
    if (pipeline_json != nullptr) {
      cfg = vsysid::from_json<vsysid::PipelineConfig>(vsysid::parse_json(pipeline_json, "pipeline config"));
    }
    std::optional<vsysid::GroundTruth> truth;
    if (truth_json != nullptr) {
      truth = vsysid::from_json<vsysid::GroundTruth>(vsysid::parse_json(truth_json, "ground truth"));
    }
    std::string id = scene_id != nullptr ? scene_id : "";
    if (id.empty() && truth) id = truth->scene_id;
    *out = new vsysid_report{vsysid::run_pipeline(tracks->value, cfg, id, truth ? &*truth : nullptr)};
  });
}

vsysid_status vsysid_report_load(const char* path, vsysid_report** out) {
  if (path == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "path and out are required");
  *out = nullptr;
  return guarded([&] {
    const std::string text = vsysid::read_text_file(path);
    *out = new vsysid_report{vsysid::from_json<vsysid::RunReport>(vsysid::parse_json(text, path))};
  });
}

vsysid_status vsysid_report_to_json(const vsysid_report* report, char** out) {
  if (report == nullptr || out == nullptr) return fail(VSYSID_E_INVALID_ARGUMENT, "report and out are required");
  *out = nullptr;
  return guarded([&] { *out = dup(vsysid::to_json(report->value).dump(1)); });
}

int vsysid_report_selected_track(const vsysid_report* report) {
  return report == nullptr ? -1 : report->value.selected_track_id;
}

double vsysid_report_mean_loglik(const vsysid_report* report) {
  return report == nullptr ? 0.0 : report->value.selected.mean_loglik;
}

vsysid_status vsysid_report_eta(const vsysid_report* report, double* eta, size_t eta_cap, size_t* eta_len) {
  if (report == nullptr || eta_len == nullptr || (eta == nullptr && eta_cap > 0)) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "report and eta_len are required");
  }
  const Eigen::VectorXd& v = report->value.selected.theta.eta;
  *eta_len = static_cast<size_t>(v.size());
  for (size_t i = 0; i < eta_cap && i < *eta_len; ++i) eta[i] = v[static_cast<Eigen::Index>(i)];
  g_last_error.clear();
  return VSYSID_OK;
}

void vsysid_report_free(vsysid_report* report) { delete report; }

vsysid_status vsysid_roi(const vsysid_tracks* tracks, const char* roi_json, char** out_json) {
  if (tracks == nullptr || out_json == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "tracks and out_json are required");
  }
  *out_json = nullptr;
  return guarded([&] {
    vsysid::RoiConfig cfg;
    if (roi_json != nullptr) cfg = vsysid::from_json<vsysid::RoiConfig>(vsysid::parse_json(roi_json, "roi config"));
    vsysid::validate(tracks->value);
    *out_json = dup(vsysid::to_json(vsysid::discover_roi(tracks->value, cfg)).dump(1));
  });
}

vsysid_status vsysid_eval(const char* reports_dir, const char* truths_dir, char** out_json, char** out_table) {
  if (reports_dir == nullptr || truths_dir == nullptr || out_json == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "reports_dir, truths_dir and out_json are required");
  }
  *out_json = nullptr;
  if (out_table != nullptr) *out_table = nullptr;
  return guarded([&] {
    const vsysid::EvalSummary summary = vsysid::evaluate_dirs(reports_dir, truths_dir);
    char* json = dup(vsysid::to_json(summary).dump(1));
    if (out_table != nullptr) {
      try {
        *out_table = dup(vsysid::format_eval_table(summary));
      } catch (...) {
        std::free(json);
        throw;
      }
    }
    *out_json = json;
  });
}

vsysid_status vsysid_export_labels(const vsysid_report* report, const char* frames_dir, char** out_json) {
  if (report == nullptr || out_json == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "report and out_json are required");
  }
  *out_json = nullptr;
  return guarded([&] {
    const auto labels = vsysid::export_labels(report->value, frames_dir != nullptr ? frames_dir : "");
    vsysid::Json a = vsysid::Json::array();
    for (const auto& l : labels) a.push_back(vsysid::to_json(l));
    *out_json = dup(a.dump(1));
  });
}

vsysid_status vsysid_plot_report(const vsysid_report* report, const char* out_dir, char** out_files) {
  if (report == nullptr || out_dir == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "report and out_dir are required");
  }
  if (out_files != nullptr) *out_files = nullptr;
  return guarded([&] {
    const auto files = vsysid::plot_report(report->value, out_dir);
    if (out_files != nullptr) *out_files = dup(paths_json(files).dump(1));
  });
}

vsysid_status vsysid_plot_roi(const char* roi_json, const vsysid_tracks* tracks, const char* out_dir,
                              char** out_files) {
  if (roi_json == nullptr || tracks == nullptr || out_dir == nullptr) {
    return fail(VSYSID_E_INVALID_ARGUMENT, "roi_json, tracks and out_dir are required");
  }
  if (out_files != nullptr) *out_files = nullptr;
  return guarded([&] {
    const auto roi = vsysid::from_json<vsysid::RoiResult>(vsysid::parse_json(roi_json, "roi result"));
    require(!roi.inlier_ids.empty(), "roi result has no inliers");
    const auto files = vsysid::plot_roi(roi, tracks->value, out_dir);
    if (out_files != nullptr) *out_files = dup(paths_json(files).dump(1));
  });
}

}  // extern "C"
