#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "vsysid/scene.hpp"

namespace vsysid {

/// Bouncing ball, 120 frames at 30 fps, pitch and yaw uniform in +-25 deg,
/// ball plane 4.5-5.5 m from the camera, 1 px noise, circle and line
/// distractors.
SceneConfig ball_scene(std::uint64_t seed, double restitution, bool distractors = true);

/// Restitution cycles through 0.6, 0.75, 0.9.
std::vector<SceneConfig> ball_corpus(int count, std::uint64_t seed, bool distractors = true);

/// 250 frames, 1 px noise, no distractors.
std::vector<SceneConfig> spiral_corpus(int count, std::uint64_t seed);

/// 300 frames of 30 vertically oscillating points sharing one frequency in
/// 0.2-0.5 Hz with varied amplitude, plus 10 random-walk distractors. The
/// weakest track sits at 10-20 dB SNR.
std::vector<SceneConfig> breathing_corpus(int count, std::uint64_t seed);

/// Ball scenes meant for rasterisation: noiseless, object frame-0 position
/// snapped onto the 10x10 tracking grid.
std::vector<SceneConfig> raster_corpus(int count, std::uint64_t seed);

/// preset: ball, ball-clean (no distractors), spiral, breathing, raster.
std::vector<SceneConfig> make_corpus(std::string_view preset, int count, std::uint64_t seed);

}  // namespace vsysid
