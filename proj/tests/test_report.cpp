#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "vsysid/corpus.hpp"
#include "vsysid/error.hpp"
#include "vsysid/image.hpp"
#include "vsysid/report.hpp"

namespace vsysid {
namespace {

PipelineConfig ball_pipeline() {
  PipelineConfig cfg;
  cfg.model = MotionModel::bouncing_ball();
  return cfg;
}

TEST(Summarize, MeanCiMedian) {
  const Summary s = summarize({4.0, 1.0, 3.0, 2.0});
  EXPECT_EQ(s.n, 4);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  // Sample stddev sqrt(5/3).
  EXPECT_NEAR(s.ci95, 1.96 * std::sqrt(5.0 / 3.0) / 2.0, 1e-12);
  const Summary one = summarize({7.0});
  EXPECT_EQ(one.ci95, 0.0);
  EXPECT_EQ(one.median, 7.0);
  EXPECT_EQ(summarize({}).n, 0);
}

TEST(ParameterErrors, ExactFitHasZeroError) {
  const SceneConfig c = test::simple_ball_scene(0.7);
  const Scene s = generate_scene(c);
  FitResult perfect;
  perfect.theta = s.truth.theta;
  perfect.extrinsics = s.truth.extrinsics;
  const ParameterErrors e = parameter_errors(s.truth, perfect, s.truth.object_track_ids.front());
  EXPECT_TRUE(e.selected_object);
  EXPECT_NEAR(e.camera_angle_deg, 0.0, 1e-6);
  ASSERT_TRUE(e.restitution_pct && e.height_pct);
  EXPECT_EQ(*e.restitution_pct, 0.0);
  EXPECT_EQ(*e.height_pct, 0.0);
  EXPECT_FALSE(e.omega_pct);
  EXPECT_FALSE(e.frequency_pct);
}

TEST(ParameterErrors, RelativePercentages) {
  const Scene s = generate_scene(test::simple_ball_scene(0.8));
  FitResult off;
  off.theta = s.truth.theta;
  off.theta.eta[ball::kRestitution] = 0.72;
  off.extrinsics = s.truth.extrinsics;
  off.extrinsics.yaw += 5.0 * test::kDeg;
  const ParameterErrors e = parameter_errors(s.truth, off, 99);
  EXPECT_FALSE(e.selected_object);
  EXPECT_NEAR(*e.restitution_pct, 10.0, 1e-9);
  EXPECT_NEAR(e.camera_angle_deg, 5.0, 1e-6);
}

TEST(Evaluate, GroupsAndAblation) {
  std::vector<RunReport> reports;
  std::vector<GroundTruth> truths;
  for (int k = 0; k < 2; ++k) {
    SceneConfig c = test::simple_ball_scene(0.7);
    c.id = "s" + std::to_string(k);
    if (k == 1) {
      Distractor d;
      d.origin = {50.0, 50.0};
      c.distractors = {d};
    }
    const Scene s = generate_scene(c);
    truths.push_back(s.truth);
    RunReport r;
    r.scene_id = c.id;
    r.selected_track_id = 0;
    r.selected.theta = s.truth.theta;
    r.selected.extrinsics = s.truth.extrinsics;
    r.selected.mean_loglik = -3.0;
    reports.push_back(r);
    RunReport full = r;
    full.config.fit.curriculum = false;
    full.selected.mean_loglik = k == 0 ? -4.0 : -2.0;
    reports.push_back(full);
  }
  const EvalSummary e = evaluate(reports, truths);
  ASSERT_EQ(e.groups.size(), 3u);
  EXPECT_EQ(e.groups[0].scenes, 2);
  EXPECT_EQ(e.groups[0].selected_object, 2);
  EXPECT_EQ(e.groups[1].scenes, 1);
  EXPECT_EQ(e.groups[2].scenes, 1);
  ASSERT_TRUE(e.groups[0].restitution_pct);
  EXPECT_EQ(e.groups[0].restitution_pct->mean, 0.0);
  EXPECT_FALSE(e.groups[0].omega_pct);
  ASSERT_TRUE(e.ablation);
  EXPECT_EQ(e.ablation->scenes.size(), 2u);
  EXPECT_EQ(e.ablation->curriculum_better, 1);
  EXPECT_NE(format_eval_table(e).find("1/2 scenes"), std::string::npos);
}

TEST(Evaluate, MissingTruthIsAnInputError) {
  RunReport r;
  r.scene_id = "ghost";
  try {
    evaluate({r}, {});
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Input);
  }
}

TEST(RunPipeline, SelectsBallAndRecordsPrediction) {
  const SceneConfig c = test::simple_ball_scene(0.7);
  const Scene s = generate_scene(c);
  const RunReport r = run_pipeline(s.tracks, ball_pipeline(), "one", &s.truth);
  EXPECT_EQ(r.selected_track_id, s.truth.object_track_ids.front());
  EXPECT_EQ(r.tracks_total, 1);
  EXPECT_EQ(r.prediction.size(), r.selected.history.size());
  ASSERT_TRUE(r.errors);
  EXPECT_LT(*r.errors->restitution_pct, 5.0);
}

TEST(RunPipeline, EmptyAfterFilteringIsNoViableTrack) {
  TrackSet ts;
  ts.video_length = 60;
  Track2D still;
  still.points.assign(60, Eigen::Vector2d(30.0, 30.0));
  ts.tracks = {still};
  try {
    run_pipeline(ts, ball_pipeline(), "still");
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoViableTrack);
    EXPECT_NE(std::string(e.what()).find("relax"), std::string::npos);
  }
}

TEST(RunPipeline, RemovingTheObjectLowersTheBestScore) {
  const SceneConfig c = ball_scene(1000, 0.6);
  const Scene s = generate_scene(c);
  const RunReport with = run_pipeline(s.tracks, ball_pipeline(), "with");
  ASSERT_EQ(with.selected_track_id, s.truth.object_track_ids.front());

  TrackSet without = s.tracks;
  std::erase_if(without.tracks, [&](const Track2D& t) { return t.id == s.truth.object_track_ids.front(); });
  const RunReport rest = run_pipeline(without, ball_pipeline(), "without");
  EXPECT_NE(rest.selected_track_id, with.selected_track_id);
  const double drop = with.scores.front().score - rest.scores.front().score;
  EXPECT_GT(drop, 1.0);
}

TEST(ExportLabels, OnePerAliveFrame) {
  RunReport r;
  Track2D t;
  t.id = 4;
  t.start_frame = 2;
  t.points = {{1.0, 2.0}, {3.0, 4.0}};
  r.fits = {{t, FitResult{}}};
  r.selected_track_id = 4;
  const auto labels = export_labels(r);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[1].frame_index, 3);
  EXPECT_EQ(labels[1].x, 3.0);
  EXPECT_TRUE(labels[0].frame.empty());

  test::TempDir dir("labels");
  for (int k = 0; k < 4; ++k) write_pgm(GrayImage(4, 4), dir / ("f" + std::to_string(k) + ".pgm"));
  EXPECT_EQ(export_labels(r, dir.path())[0].frame, "f2.pgm");

  r.selected_track_id = 5;
  EXPECT_THROW(export_labels(r), Error);
}

}  // namespace
}  // namespace vsysid
