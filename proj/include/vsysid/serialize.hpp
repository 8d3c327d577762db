#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "vsysid/camera.hpp"
#include "vsysid/dynamics.hpp"
#include "vsysid/fit.hpp"
#include "vsysid/klt.hpp"
#include "vsysid/report.hpp"
#include "vsysid/roi.hpp"
#include "vsysid/scene.hpp"
#include "vsysid/select.hpp"
#include "vsysid/tracks.hpp"

namespace vsysid {

using Json = nlohmann::json;

/// Throws Error(Parse) with the line and column of the first syntax error.
Json parse_json(const std::string& text, std::string_view what);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string_view distractor_kind_name(DistractorKind kind) noexcept;
DistractorKind parse_distractor_kind(std::string_view name);
std::string_view alternation_order_name(AlternationOrder order) noexcept;
AlternationOrder parse_alternation_order(std::string_view name);

Json to_json(const MotionModel& v);
Json to_json(const Theta& v);
Json to_json(const Intrinsics& v);
Json to_json(const Extrinsics& v);
Json to_json(const ImageSize& v);
Json to_json(const Track2D& v);
Json to_json(const TrackSet& v);
Json to_json(const Distractor& v);
Json to_json(const SceneConfig& v);
Json to_json(const GroundTruth& v);
Json to_json(const FitConfig& v);
Json to_json(const CurriculumRecord& v);
Json to_json(const FitResult& v);
Json to_json(const PredictionPoint& v);
Json to_json(const ScoredTrack& v);
Json to_json(const SinusoidFit& v);
Json to_json(const RoiTrackFit& v);
Json to_json(const RoiResult& v);
Json to_json(const KltConfig& v);
Json to_json(const PipelineConfig& v);
Json to_json(const TrackFit& v);
Json to_json(const ParameterErrors& v);
Json to_json(const RunReport& v);
Json to_json(const Summary& v);
Json to_json(const EvalSummary& v);
Json to_json(const PseudoLabel& v);

/// Missing optional fields take their defaults; wrong types and missing
/// required fields throw Error(Schema) naming the field path.
template <class T>
T from_json(const Json& j);

template <> MotionModel from_json<MotionModel>(const Json& j);
template <> Theta from_json<Theta>(const Json& j);
template <> Intrinsics from_json<Intrinsics>(const Json& j);
template <> Extrinsics from_json<Extrinsics>(const Json& j);
template <> TrackSet from_json<TrackSet>(const Json& j);
template <> SceneConfig from_json<SceneConfig>(const Json& j);
template <> GroundTruth from_json<GroundTruth>(const Json& j);
template <> FitConfig from_json<FitConfig>(const Json& j);
template <> FitResult from_json<FitResult>(const Json& j);
template <> RoiResult from_json<RoiResult>(const Json& j);
template <> RoiConfig from_json<RoiConfig>(const Json& j);
template <> KltConfig from_json<KltConfig>(const Json& j);
template <> PipelineConfig from_json<PipelineConfig>(const Json& j);
template <> RunReport from_json<RunReport>(const Json& j);

/// A scene file holds one config object or an array of them.
std::vector<SceneConfig> scene_configs_from_json(const Json& j);

}  // namespace vsysid
