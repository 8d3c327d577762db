#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsysid/fit.hpp"
#include "vsysid/scene.hpp"
#include "vsysid/select.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

struct PipelineConfig {
  MotionModel model;
  Intrinsics intrinsics;
  FitConfig fit;
  double min_len_frac = 0.6;
  double min_stddev_px = 10.0;
  double entropy_weight = 1.0;
  int workers = 1;
};

struct TrackFit {
  Track2D track;
  FitResult fit;
};

/// Errors of the selected fit against the generator's parameters. Metrics
/// that do not apply to the motion model are left empty.
struct ParameterErrors {
  bool selected_object = false;
  double camera_angle_deg = 0.0;
  std::optional<double> restitution_pct;
  std::optional<double> height_pct;  // initial height above the floor
  std::optional<double> omega_pct;
  std::optional<double> frequency_pct;
};

struct RunReport {
  std::string scene_id;
  PipelineConfig config;
  double frame_rate = 30.0;
  ImageSize image_size;
  int tracks_total = 0;
  int tracks_filtered = 0;
  std::vector<ScoredTrack> scores;  // descending
  std::vector<TrackFit> fits;       // one per filtered track, input order
  int selected_track_id = 0;
  FitResult selected;
  std::vector<PredictionPoint> prediction;
  std::optional<ParameterErrors> errors;
  double elapsed_s = 0.0;

  const TrackFit* find_fit(int track_id) const;
};

ParameterErrors parameter_errors(const GroundTruth& truth, const FitResult& fit, int selected_id);

/// filter -> fit every survivor -> score -> select. Throws
/// Error(NoViableTrack) when the filter leaves nothing to fit.
RunReport run_pipeline(const TrackSet& ts, const PipelineConfig& cfg, const std::string& scene_id,
                       const GroundTruth* truth = nullptr);

struct Summary {
  int n = 0;
  double mean = 0.0;
  double ci95 = 0.0;  // half-width, normal approximation
  double median = 0.0;
};

Summary summarize(std::vector<double> values);

struct EvalGroup {
  std::string name;
  int scenes = 0;
  int selected_object = 0;
  std::optional<Summary> restitution_pct;
  std::optional<Summary> height_pct;
  std::optional<Summary> camera_angle_deg;
  std::optional<Summary> omega_pct;
  std::optional<Summary> frequency_pct;
};

struct AblationScene {
  std::string scene_id;
  double curriculum_loglik = 0.0;
  double full_loglik = 0.0;
};

struct Ablation {
  std::vector<AblationScene> scenes;
  int curriculum_better = 0;
};

struct EvalSummary {
  std::vector<EvalGroup> groups;  // all, with_distractors, without_distractors
  std::optional<Ablation> ablation;
};

/// Reports are matched to truths by scene id; reports whose curriculum flag
/// is off feed only the ablation.
EvalSummary evaluate(const std::vector<RunReport>& reports, const std::vector<GroundTruth>& truths);
EvalSummary evaluate_dirs(const std::filesystem::path& reports_dir,
                          const std::filesystem::path& truths_dir);
std::string format_eval_table(const EvalSummary& summary);

struct PseudoLabel {
  int frame_index = 0;
  double x = 0.0;
  double y = 0.0;
  std::string frame;  // file name when a frames directory was given
};

/// Keypoints of the selected track, one per frame it is alive.
std::vector<PseudoLabel> export_labels(const RunReport& report,
                                       const std::filesystem::path& frames_dir = {});

}  // namespace vsysid
