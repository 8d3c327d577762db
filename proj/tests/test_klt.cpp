#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "support.hpp"
#include "vsysid/error.hpp"
#include "vsysid/image.hpp"
#include "vsysid/klt.hpp"
#include "vsysid/scene.hpp"

namespace vsysid {
namespace {

using test::TempDir;

/// Smooth texture with gradients in every direction, shifted by (dx, dy).
GrayImage texture(int w, int h, double dx, double dy) {
  GrayImage img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double u = x - dx, v = y - dy;
      const double val = 128.0 + 40.0 * std::sin(0.21 * u + 0.13 * v) + 35.0 * std::sin(0.17 * v - 0.07 * u + 1.0) +
                         25.0 * std::sin(0.31 * u) * std::cos(0.23 * v);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(val), 0L, 255L));
    }
  }
  return img;
}

TEST(GridKeypoints, SingleCellIsImageCentre) {
  const auto pts = grid_keypoints(320, 240, 1, 1);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0], Eigen::Vector2d(160.0, 120.0));
}

TEST(GridKeypoints, TenByTenCellCentres) {
  const auto pts = grid_keypoints(320, 240, 10, 10);
  ASSERT_EQ(pts.size(), 100u);
  EXPECT_EQ(pts.front(), Eigen::Vector2d(16.0, 12.0));
  EXPECT_EQ(pts.back(), Eigen::Vector2d(304.0, 228.0));
  // Row-major: (w / cols) * (j + 0.5), (h / rows) * (i + 0.5).
  EXPECT_EQ(pts[13], Eigen::Vector2d(32.0 * 3.5, 24.0 * 1.5));
}

TEST(GridKeypoints, RejectsEmptyGrid) { EXPECT_THROW(grid_keypoints(320, 240, 0, 3), Error); }

TEST(KltConfig, Validation) {
  KltConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window = 14;
  EXPECT_THROW(c.validate(), Error);
  c.window = 1;
  EXPECT_THROW(c.validate(), Error);
  c = KltConfig{};
  c.pyramid_levels = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Pyramid, HalvesEachLevel) {
  const auto pyr = build_pyramid(texture(320, 240, 0, 0), 3);
  ASSERT_EQ(pyr.size(), 3u);
  EXPECT_EQ(pyr[1].width, 160);
  EXPECT_EQ(pyr[1].height, 120);
  EXPECT_EQ(pyr[2].width, 80);
  EXPECT_EQ(pyr[2].height, 60);
  // A flat image stays flat at every level.
  for (const auto& level : build_pyramid(GrayImage(33, 17, 200), 3)) {
    for (float v : level.data) EXPECT_NEAR(v, 200.0f / 255.0f, 1e-6f);
  }
}

TEST(FloatImage, BilinearSampleInterpolates) {
  FloatImage f{2, 2, {0.0f, 1.0f, 2.0f, 3.0f}};
  EXPECT_DOUBLE_EQ(f.sample(0.5, 0.5), 1.5);
  EXPECT_DOUBLE_EQ(f.sample(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(f.sample(-4.0, 9.0), 2.0);  // clamped to the bottom-left pixel
}

TEST(TrackSequence, GlobalShiftOfOnePixelPerFrame) {
  FrameSequence seq;
  for (int f = 0; f < 12; ++f) seq.frames.push_back(texture(320, 240, f, 0.0));
  const TrackSet ts = track_sequence(seq);
  std::vector<double> steps;
  for (const auto& t : ts.tracks) {
    for (std::size_t k = 1; k < t.lifetime(); ++k) steps.push_back(t.points[k].x() - t.points[k - 1].x());
  }
  ASSERT_GT(steps.size(), 500u);
  std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
  const double median = steps[steps.size() / 2];
  EXPECT_GE(median, 0.9);
  EXPECT_LE(median, 1.1);
}

TEST(TrackSequence, FollowsTranslatingDisk) {
  SceneConfig c = test::simple_ball_scene(0.8);
  c.frames = 40;
  Distractor disk;
  disk.kind = DistractorKind::Line;
  disk.origin = {48.0, 204.0};  // grid cell (row 8, col 1)
  disk.velocity_px = {60.0, 0.0};  // 2 px per frame at 30 fps
  c.distractors = {disk};
  const Scene s = generate_scene(c);
  FrameSequence seq{rasterize_scene(c), c.fps};
  const TrackSet ts = track_sequence(seq);
  const Track2D* t = ts.find(81);
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->points.front(), disk.origin);
  ASSERT_GE(t->lifetime(), 30u);
  const Track2D& truth = s.tracks.tracks[1];
  double sse = 0.0;
  for (std::size_t k = 0; k < t->lifetime(); ++k) sse += (t->points[k] - truth.points[k]).squaredNorm();
  EXPECT_LT(std::sqrt(sse / static_cast<double>(t->lifetime())), 1.0);
}

TEST(TrackSequence, FlatBackgroundTracksEndImmediately) {
  FrameSequence seq;
  seq.frames.assign(5, GrayImage(64, 48, 90));
  const TrackSet ts = track_sequence(seq);
  ASSERT_EQ(ts.tracks.size(), 100u);
  for (const auto& t : ts.tracks) EXPECT_EQ(t.lifetime(), 1u);
}

TEST(TrackSequence, TrackEndsWhenContentLeavesImage) {
  FrameSequence seq;
  for (int f = 0; f < 60; ++f) seq.frames.push_back(texture(160, 120, 3.0 * f, 0.0));
  KltConfig cfg;
  cfg.grid_rows = 1;
  cfg.grid_cols = 8;
  const TrackSet ts = track_sequence(seq, cfg);
  for (const auto& t : ts.tracks) {
    EXPECT_LT(t.lifetime(), 60u);
    EXPECT_LE(t.points.back().x(), 159.0);
  }
}

TEST(TrackSequence, RejectsBadInput) {
  FrameSequence one;
  one.frames = {GrayImage(10, 10)};
  EXPECT_THROW(track_sequence(one), Error);
  FrameSequence mixed;
  mixed.frames = {GrayImage(10, 10), GrayImage(12, 10)};
  try {
    track_sequence(mixed);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Input);
  }
}

TEST(TrackSequence, WorkerCountDoesNotChangeResult) {
  FrameSequence seq;
  for (int f = 0; f < 8; ++f) seq.frames.push_back(texture(160, 120, 0.7 * f, -0.4 * f));
  KltConfig one;
  KltConfig four;
  four.workers = 4;
  EXPECT_EQ(track_sequence(seq, one), track_sequence(seq, four));
}

TEST(Pgm, RoundTripAndLexicographicLoad) {
  TempDir dir("pgm");
  const GrayImage a = texture(20, 10, 0, 0);
  const GrayImage b = texture(20, 10, 1, 0);
  write_pgm(b, dir / "frame_0001.pgm");
  write_pgm(a, dir / "frame_0000.pgm");
  EXPECT_EQ(read_pgm(dir / "frame_0000.pgm"), a);
  const FrameSequence seq = load_frames(dir.path(), 25.0);
  ASSERT_EQ(seq.frames.size(), 2u);
  EXPECT_EQ(seq.frames[0], a);
  EXPECT_EQ(seq.frames[1], b);
  EXPECT_EQ(seq.frame_rate, 25.0);
}

TEST(Pgm, RejectsMalformedFiles) {
  TempDir dir("pgm-bad");
  {
    std::FILE* f = std::fopen((dir / "x.pgm").c_str(), "wb");
    std::fputs("P2\n2 2\n255\n1 2 3 4\n", f);
    std::fclose(f);
  }
  EXPECT_THROW(read_pgm(dir / "x.pgm"), Error);
  EXPECT_THROW(load_frames(dir / "missing", 30.0), Error);
}

}  // namespace
}  // namespace vsysid
