#include "vsysid/serialize.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "vsysid/error.hpp"

namespace vsysid {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// JSON has no inf/nan; they are written as null and read back as NaN.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

Json vec2(const Eigen::Vector2d& v) { return Json::array({number(v.x()), number(v.y())}); }
Json vec3(const Eigen::Vector3d& v) { return Json::array({number(v.x()), number(v.y()), number(v.z())}); }

template <class T, class F>
Json list(const std::vector<T>& items, F&& fn) {
  Json a = Json::array();
  for (const auto& item : items) a.push_back(fn(item));
  return a;
}

template <class T>
Json list(const std::vector<T>& items) {
  return list(items, [](const T& x) { return to_json(x); });
}

/// A JSON value plus the field path used in error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::Schema, (path_.empty() ? std::string("document") : path_) + ": " + what);
  }

  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) Node(j_, join(key)).fail("missing required field");
    return Node(*it, join(key));
  }

  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const { return j_.size(); }

  double as_double() const {
    if (j_.is_null()) return kNaN;
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }

  long long as_int() const {
    if (j_.is_number_integer() || j_.is_number_unsigned()) return j_.get<long long>();
    if (j_.is_number_float()) {
      const double d = j_.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    fail("expected an integer");
  }

  std::uint64_t as_u64() const {
    if (j_.is_number_unsigned()) return j_.get<std::uint64_t>();
    const long long v = as_int();
    if (v < 0) fail("expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }

  bool as_bool() const {
    if (!j_.is_boolean()) fail("expected true or false");
    return j_.get<bool>();
  }

  std::string as_string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }

  Node array() const {
    if (!j_.is_array()) fail("expected an array");
    return *this;
  }

  Eigen::VectorXd as_vector(Eigen::Index expected = -1) const {
    array();
    if (expected >= 0 && static_cast<Eigen::Index>(size()) != expected) {
      fail("expected " + std::to_string(expected) + " values, got " + std::to_string(size()));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v[static_cast<Eigen::Index>(i)] = at(i).as_double();
    return v;
  }

  Eigen::Vector2d as_vec2() const { return as_vector(2); }
  Eigen::Vector3d as_vec3() const { return as_vector(3); }

  int as_int32() const {
    const long long v = as_int();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail("integer out of range");
    }
    return static_cast<int>(v);
  }

  // Optional-field readers keep the default when the key is absent.
  void get(const char* key, double& out) const { if (has(key)) out = at(key).as_double(); }
  void get(const char* key, int& out) const { if (has(key)) out = at(key).as_int32(); }
  void get(const char* key, bool& out) const { if (has(key)) out = at(key).as_bool(); }
  void get(const char* key, std::string& out) const { if (has(key)) out = at(key).as_string(); }
  void get(const char* key, std::uint64_t& out) const { if (has(key)) out = at(key).as_u64(); }
  void get(const char* key, Eigen::Vector2d& out) const { if (has(key)) out = at(key).as_vec2(); }
  void get(const char* key, Eigen::Vector3d& out) const { if (has(key)) out = at(key).as_vec3(); }
  void get(const char* key, std::optional<double>& out) const {
    if (has(key) && !at(key).json().is_null()) out = at(key).as_double();
  }

  std::vector<int> as_int_list() const {
    array();
    std::vector<int> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).as_int32());
    return out;
  }

 private:
  std::string join(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json& j_;
  std::string path_;
};

template <class T>
T read(const Node& n);

template <class T, class F>
std::vector<T> read_list(const Node& n, F&& fn) {
  n.array();
  std::vector<T> out;
  out.reserve(n.size());
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(fn(n.at(i)));
  return out;
}

template <>
MotionModel read<MotionModel>(const Node& n) {
  MotionModel m;
  if (n.json().is_string()) {
    try {
      m.kind = parse_model_name(n.as_string());
    } catch (const Error& e) {
      n.fail(e.what());
    }
    return m;
  }
  try {
    m.kind = parse_model_name(n.at("kind").as_string());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    n.at("kind").fail(e.what());
  }
  n.get("gravity", m.gravity);
  return m;
}

template <>
Theta read<Theta>(const Node& n) {
  Theta t;
  t.eta = n.at("eta").as_vector();
  n.get("p0", t.p0);
  n.get("v0", t.v0);
  return t;
}

template <>
Intrinsics read<Intrinsics>(const Node& n) {
  Intrinsics k;
  n.get("fx", k.fx);
  n.get("fy", k.fy);
  n.get("cx", k.cx);
  n.get("cy", k.cy);
  return k;
}

template <>
Extrinsics read<Extrinsics>(const Node& n) {
  Extrinsics e;
  n.get("pitch", e.pitch);
  n.get("yaw", e.yaw);
  n.get("t", e.t);
  return e;
}

template <>
ImageSize read<ImageSize>(const Node& n) {
  n.array();
  if (n.size() != 2) n.fail("expected [width, height]");
  return ImageSize{n.at(std::size_t{0}).as_int32(), n.at(std::size_t{1}).as_int32()};
}

template <>
Track2D read<Track2D>(const Node& n) {
  Track2D t;
  t.id = n.at("id").as_int32();
  n.get("start_frame", t.start_frame);
  t.points = read_list<Eigen::Vector2d>(n.at("points"), [](const Node& p) { return p.as_vec2(); });
  return t;
}

template <>
TrackSet read<TrackSet>(const Node& n) {
  TrackSet ts;
  ts.video_length = n.at("video_length").as_int32();
  ts.frame_rate = n.at("frame_rate").as_double();
  if (n.has("image_size")) ts.image_size = read<ImageSize>(n.at("image_size"));
  ts.tracks = read_list<Track2D>(n.at("tracks"), read<Track2D>);
  return ts;
}

template <>
Distractor read<Distractor>(const Node& n) {
  Distractor d;
  try {
    d.kind = parse_distractor_kind(n.at("kind").as_string());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Schema) throw;
    n.at("kind").fail(e.what());
  }
  n.get("origin", d.origin);
  n.get("radius_px", d.radius_px);
  n.get("angular_speed", d.angular_speed);
  n.get("phase", d.phase);
  n.get("velocity_px", d.velocity_px);
  n.get("step_px", d.step_px);
  n.get("disk_radius_px", d.disk_radius_px);
  return d;
}

template <>
SceneConfig read<SceneConfig>(const Node& n) {
  SceneConfig c;
  n.get("id", c.id);
  c.model = read<MotionModel>(n.at("model"));
  c.true_theta = read<Theta>(n.at("true_theta"));
  if (n.has("true_extrinsics")) c.true_extrinsics = read<Extrinsics>(n.at("true_extrinsics"));
  if (n.has("intrinsics")) c.intrinsics = read<Intrinsics>(n.at("intrinsics"));
  n.get("frames", c.frames);
  n.get("fps", c.fps);
  if (n.has("image_size")) c.image_size = read<ImageSize>(n.at("image_size"));
  n.get("noise_px", c.noise_px);
  if (n.has("distractors")) c.distractors = read_list<Distractor>(n.at("distractors"), read<Distractor>);
  n.get("seed", c.seed);
  n.get("object_tracks", c.object_tracks);
  n.get("object_spacing", c.object_spacing);
  if (n.has("amplitude_scales")) {
    c.amplitude_scales = read_list<double>(n.at("amplitude_scales"), [](const Node& x) { return x.as_double(); });
  }
  n.get("object_radius_m", c.object_radius_m);
  return c;
}

template <>
GroundTruth read<GroundTruth>(const Node& n) {
  GroundTruth g;
  n.get("scene_id", g.scene_id);
  g.model = read<MotionModel>(n.at("model"));
  g.theta = read<Theta>(n.at("theta"));
  g.extrinsics = read<Extrinsics>(n.at("extrinsics"));
  if (n.has("intrinsics")) g.intrinsics = read<Intrinsics>(n.at("intrinsics"));
  if (n.has("object_track_ids")) g.object_track_ids = n.at("object_track_ids").as_int_list();
  if (n.has("distractor_track_ids")) g.distractor_track_ids = n.at("distractor_track_ids").as_int_list();
  n.get("frames", g.frames);
  n.get("fps", g.fps);
  if (n.has("image_size")) g.image_size = read<ImageSize>(n.at("image_size"));
  n.get("noise_px", g.noise_px);
  n.get("seed", g.seed);
  return g;
}

template <>
FitConfig read<FitConfig>(const Node& n) {
  FitConfig c;
  n.get("t0", c.t0);
  n.get("m", c.m);
  n.get("sigma_px", c.sigma_px);
  n.get("fd_step", c.fd_step);
  n.get("bfgs_max_iters", c.bfgs_max_iters);
  n.get("bfgs_grad_tol", c.bfgs_grad_tol);
  n.get("max_alternations_per_prefix", c.max_alternations_per_prefix);
  if (n.has("order")) {
    try {
      c.order = parse_alternation_order(n.at("order").as_string());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Schema) throw;
      n.at("order").fail(e.what());
    }
  }
  n.get("curriculum", c.curriculum);
  return c;
}

template <>
CurriculumRecord read<CurriculumRecord>(const Node& n) {
  CurriculumRecord r;
  r.prefix_len = n.at("prefix_len").as_int32();
  n.get("mean_loglik", r.mean_loglik);
  n.get("rmse_px", r.rmse_px);
  r.theta = read<Theta>(n.at("theta"));
  r.extrinsics = read<Extrinsics>(n.at("extrinsics"));
  if (n.has("step_nll")) {
    r.step_nll = read_list<double>(n.at("step_nll"), [](const Node& x) { return x.as_double(); });
  }
  return r;
}

template <>
FitResult read<FitResult>(const Node& n) {
  FitResult f;
  f.theta = read<Theta>(n.at("theta"));
  f.extrinsics = read<Extrinsics>(n.at("extrinsics"));
  n.get("mean_loglik", f.mean_loglik);
  n.get("rmse_px", f.rmse_px);
  n.get("converged", f.converged);
  if (n.has("history")) f.history = read_list<CurriculumRecord>(n.at("history"), read<CurriculumRecord>);
  return f;
}

template <>
PredictionPoint read<PredictionPoint>(const Node& n) {
  PredictionPoint p;
  p.prefix_len = n.at("prefix_len").as_int32();
  n.get("rmse_px", p.rmse_px);
  if (n.has("future_frames")) p.future_frames = static_cast<std::size_t>(n.at("future_frames").as_u64());
  return p;
}

template <>
ScoredTrack read<ScoredTrack>(const Node& n) {
  ScoredTrack s;
  s.track_id = n.at("track_id").as_int32();
  n.get("mean_loglik", s.mean_loglik);
  n.get("entropy_px", s.entropy_px);
  n.get("score", s.score);
  return s;
}

template <>
SinusoidFit read<SinusoidFit>(const Node& n) {
  SinusoidFit f;
  n.get("A", f.amplitude);
  n.get("f", f.frequency);
  n.get("phi", f.phase);
  n.get("c", f.offset);
  n.get("mse", f.mse);
  return f;
}

template <>
RoiTrackFit read<RoiTrackFit>(const Node& n) {
  RoiTrackFit r;
  r.track_id = n.at("track_id").as_int32();
  n.get("stddev_px", r.stddev_px);
  r.fit = read<SinusoidFit>(n.at("fit"));
  n.get("inliers", r.inliers);
  n.get("score", r.score);
  return r;
}

template <>
ParameterErrors read<ParameterErrors>(const Node& n) {
  ParameterErrors e;
  n.get("selected_object", e.selected_object);
  n.get("camera_angle_deg", e.camera_angle_deg);
  n.get("restitution_pct", e.restitution_pct);
  n.get("height_pct", e.height_pct);
  n.get("omega_pct", e.omega_pct);
  n.get("frequency_pct", e.frequency_pct);
  return e;
}

template <>
PipelineConfig read<PipelineConfig>(const Node& n) {
  PipelineConfig c;
  if (n.has("model")) c.model = read<MotionModel>(n.at("model"));
  if (n.has("intrinsics")) c.intrinsics = read<Intrinsics>(n.at("intrinsics"));
  if (n.has("fit")) c.fit = read<FitConfig>(n.at("fit"));
  n.get("min_len_frac", c.min_len_frac);
  n.get("min_stddev_px", c.min_stddev_px);
  n.get("entropy_weight", c.entropy_weight);
  n.get("workers", c.workers);
  return c;
}

}  // namespace

Json parse_json(const std::string& text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorCode::Parse, std::string(what) + ": malformed JSON at line " + std::to_string(line) +
                                      ", column " + std::to_string(col));
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string_view distractor_kind_name(DistractorKind kind) noexcept {
  switch (kind) {
    case DistractorKind::Circle: return "circle";
    case DistractorKind::Line: return "line";
    case DistractorKind::Static: return "static";
    case DistractorKind::RandomWalk: return "random_walk";
  }
  return "static";
}

DistractorKind parse_distractor_kind(std::string_view name) {
  if (name == "circle") return DistractorKind::Circle;
  if (name == "line") return DistractorKind::Line;
  if (name == "static") return DistractorKind::Static;
  if (name == "random_walk") return DistractorKind::RandomWalk;
  throw Error(ErrorCode::Input, "unknown distractor kind '" + std::string(name) +
                                    "' (expected circle, line, static or random_walk)");
}

std::string_view alternation_order_name(AlternationOrder order) noexcept {
  return order == AlternationOrder::PhysicsFirst ? "physics-first" : "pose-first";
}

AlternationOrder parse_alternation_order(std::string_view name) {
  if (name == "physics-first") return AlternationOrder::PhysicsFirst;
  if (name == "pose-first") return AlternationOrder::PoseFirst;
  throw Error(ErrorCode::Input, "unknown alternation order '" + std::string(name) +
                                    "' (expected physics-first or pose-first)");
}

Json to_json(const MotionModel& v) {
  return {{"kind", std::string(model_name(v.kind))}, {"gravity", number(v.gravity)}};
}

Json to_json(const Theta& v) { return {{"eta", vec(v.eta)}, {"p0", vec3(v.p0)}, {"v0", vec3(v.v0)}}; }

Json to_json(const Intrinsics& v) {
  return {{"fx", number(v.fx)}, {"fy", number(v.fy)}, {"cx", number(v.cx)}, {"cy", number(v.cy)}};
}

Json to_json(const Extrinsics& v) {
  return {{"pitch", number(v.pitch)}, {"yaw", number(v.yaw)}, {"t", vec3(v.t)}};
}

Json to_json(const ImageSize& v) { return Json::array({v.width, v.height}); }

Json to_json(const Track2D& v) {
  return {{"id", v.id}, {"start_frame", v.start_frame}, {"points", list(v.points, vec2)}};
}

Json to_json(const TrackSet& v) {
  return {{"video_length", v.video_length},
          {"frame_rate", number(v.frame_rate)},
          {"image_size", to_json(v.image_size)},
          {"tracks", list(v.tracks)}};
}

Json to_json(const Distractor& v) {
  return {{"kind", std::string(distractor_kind_name(v.kind))},
          {"origin", vec2(v.origin)},
          {"radius_px", number(v.radius_px)},
          {"angular_speed", number(v.angular_speed)},
          {"phase", number(v.phase)},
          {"velocity_px", vec2(v.velocity_px)},
          {"step_px", number(v.step_px)},
          {"disk_radius_px", number(v.disk_radius_px)}};
}

Json to_json(const SceneConfig& v) {
  return {{"id", v.id},
          {"model", to_json(v.model)},
          {"true_theta", to_json(v.true_theta)},
          {"true_extrinsics", to_json(v.true_extrinsics)},
          {"intrinsics", to_json(v.intrinsics)},
          {"frames", v.frames},
          {"fps", number(v.fps)},
          {"image_size", to_json(v.image_size)},
          {"noise_px", number(v.noise_px)},
          {"distractors", list(v.distractors)},
          {"seed", v.seed},
          {"object_tracks", v.object_tracks},
          {"object_spacing", vec3(v.object_spacing)},
          {"amplitude_scales", list(v.amplitude_scales, number)},
          {"object_radius_m", number(v.object_radius_m)}};
}

Json to_json(const GroundTruth& v) {
  return {{"scene_id", v.scene_id},
          {"model", to_json(v.model)},
          {"theta", to_json(v.theta)},
          {"extrinsics", to_json(v.extrinsics)},
          {"intrinsics", to_json(v.intrinsics)},
          {"object_track_ids", v.object_track_ids},
          {"distractor_track_ids", v.distractor_track_ids},
          {"frames", v.frames},
          {"fps", number(v.fps)},
          {"image_size", to_json(v.image_size)},
          {"noise_px", number(v.noise_px)},
          {"seed", v.seed}};
}

Json to_json(const FitConfig& v) {
  return {{"t0", v.t0},
          {"m", v.m},
          {"sigma_px", number(v.sigma_px)},
          {"fd_step", number(v.fd_step)},
          {"bfgs_max_iters", v.bfgs_max_iters},
          {"bfgs_grad_tol", number(v.bfgs_grad_tol)},
          {"max_alternations_per_prefix", v.max_alternations_per_prefix},
          {"order", std::string(alternation_order_name(v.order))},
          {"curriculum", v.curriculum}};
}

Json to_json(const CurriculumRecord& v) {
  return {{"prefix_len", v.prefix_len},
          {"mean_loglik", number(v.mean_loglik)},
          {"rmse_px", number(v.rmse_px)},
          {"theta", to_json(v.theta)},
          {"extrinsics", to_json(v.extrinsics)},
          {"step_nll", list(v.step_nll, number)}};
}

Json to_json(const FitResult& v) {
  return {{"theta", to_json(v.theta)},
          {"extrinsics", to_json(v.extrinsics)},
          {"mean_loglik", number(v.mean_loglik)},
          {"rmse_px", number(v.rmse_px)},
          {"converged", v.converged},
          {"history", list(v.history)}};
}

Json to_json(const PredictionPoint& v) {
  return {{"prefix_len", v.prefix_len}, {"rmse_px", number(v.rmse_px)}, {"future_frames", v.future_frames}};
}

Json to_json(const ScoredTrack& v) {
  return {{"track_id", v.track_id},
          {"mean_loglik", number(v.mean_loglik)},
          {"entropy_px", number(v.entropy_px)},
          {"score", number(v.score)}};
}

Json to_json(const SinusoidFit& v) {
  return {{"A", number(v.amplitude)},
          {"f", number(v.frequency)},
          {"phi", number(v.phase)},
          {"c", number(v.offset)},
          {"mse", number(v.mse)}};
}

Json to_json(const RoiTrackFit& v) {
  return {{"track_id", v.track_id},
          {"stddev_px", number(v.stddev_px)},
          {"fit", to_json(v.fit)},
          {"inliers", v.inliers},
          {"score", number(v.score)}};
}

Json to_json(const RoiResult& v) {
  return {{"best", v.best_track_id},
          {"inliers", v.inlier_ids},
          {"period_s", number(v.period_s)},
          {"fits", list(v.fits)}};
}

Json to_json(const KltConfig& v) {
  return {{"grid", Json::array({v.grid_rows, v.grid_cols})},
          {"window", v.window},
          {"pyramid_levels", v.pyramid_levels},
          {"max_iters", v.max_iters},
          {"convergence_eps", number(v.convergence_eps)},
          {"max_residual", number(v.max_residual)},
          {"min_eigenvalue", number(v.min_eigenvalue)},
          {"workers", v.workers}};
}

Json to_json(const PipelineConfig& v) {
  return {{"model", to_json(v.model)},
          {"intrinsics", to_json(v.intrinsics)},
          {"fit", to_json(v.fit)},
          {"min_len_frac", number(v.min_len_frac)},
          {"min_stddev_px", number(v.min_stddev_px)},
          {"entropy_weight", number(v.entropy_weight)},
          {"workers", v.workers}};
}

Json to_json(const TrackFit& v) { return {{"track", to_json(v.track)}, {"fit", to_json(v.fit)}}; }

Json to_json(const ParameterErrors& v) {
  auto opt = [](const std::optional<double>& x) { return x ? number(*x) : Json(nullptr); };
  return {{"selected_object", v.selected_object},
          {"camera_angle_deg", number(v.camera_angle_deg)},
          {"restitution_pct", opt(v.restitution_pct)},
          {"height_pct", opt(v.height_pct)},
          {"omega_pct", opt(v.omega_pct)},
          {"frequency_pct", opt(v.frequency_pct)}};
}

Json to_json(const RunReport& v) {
  return {{"scene_id", v.scene_id},
          {"config", to_json(v.config)},
          {"frame_rate", number(v.frame_rate)},
          {"image_size", to_json(v.image_size)},
          {"tracks_total", v.tracks_total},
          {"tracks_filtered", v.tracks_filtered},
          {"scores", list(v.scores)},
          {"selected_track_id", v.selected_track_id},
          {"selected", to_json(v.selected)},
          {"prediction", list(v.prediction)},
          {"errors", v.errors ? to_json(*v.errors) : Json(nullptr)},
          {"elapsed_s", number(v.elapsed_s)},
          {"fits", list(v.fits)}};
}

Json to_json(const Summary& v) {
  return {{"n", v.n}, {"mean", number(v.mean)}, {"ci95", number(v.ci95)}, {"median", number(v.median)}};
}

Json to_json(const EvalSummary& v) {
  auto opt = [](const std::optional<Summary>& s) { return s ? to_json(*s) : Json(nullptr); };
  Json groups = Json::array();
  for (const auto& g : v.groups) {
    groups.push_back({{"name", g.name},
                      {"scenes", g.scenes},
                      {"selected_object", g.selected_object},
                      {"restitution_pct", opt(g.restitution_pct)},
                      {"height_pct", opt(g.height_pct)},
                      {"camera_angle_deg", opt(g.camera_angle_deg)},
                      {"omega_pct", opt(g.omega_pct)},
                      {"frequency_pct", opt(g.frequency_pct)}});
  }
  Json out = {{"groups", groups}, {"ablation", nullptr}};
  if (v.ablation) {
    Json scenes = Json::array();
    for (const auto& s : v.ablation->scenes) {
      scenes.push_back({{"scene_id", s.scene_id},
                        {"curriculum_loglik", number(s.curriculum_loglik)},
                        {"full_loglik", number(s.full_loglik)}});
    }
    out["ablation"] = {{"scenes", scenes}, {"curriculum_better", v.ablation->curriculum_better}};
  }
  return out;
}

Json to_json(const PseudoLabel& v) {
  Json j = {{"frame_index", v.frame_index}, {"x", number(v.x)}, {"y", number(v.y)}};
  if (!v.frame.empty()) j["frame"] = v.frame;
  return j;
}

template <> MotionModel from_json<MotionModel>(const Json& j) { return read<MotionModel>(Node(j, "")); }
template <> Theta from_json<Theta>(const Json& j) { return read<Theta>(Node(j, "")); }
template <> Intrinsics from_json<Intrinsics>(const Json& j) { return read<Intrinsics>(Node(j, "")); }
template <> Extrinsics from_json<Extrinsics>(const Json& j) { return read<Extrinsics>(Node(j, "")); }
template <> TrackSet from_json<TrackSet>(const Json& j) { return read<TrackSet>(Node(j, "")); }
template <> SceneConfig from_json<SceneConfig>(const Json& j) { return read<SceneConfig>(Node(j, "")); }
template <> GroundTruth from_json<GroundTruth>(const Json& j) { return read<GroundTruth>(Node(j, "")); }
template <> FitConfig from_json<FitConfig>(const Json& j) { return read<FitConfig>(Node(j, "")); }
template <> FitResult from_json<FitResult>(const Json& j) { return read<FitResult>(Node(j, "")); }
template <> PipelineConfig from_json<PipelineConfig>(const Json& j) { return read<PipelineConfig>(Node(j, "")); }

template <>
RoiResult from_json<RoiResult>(const Json& j) {
  const Node n(j, "");
  RoiResult r;
  r.best_track_id = n.at("best").as_int32();
  r.inlier_ids = n.at("inliers").as_int_list();
  r.period_s = n.at("period_s").as_double();
  if (n.has("fits")) r.fits = read_list<RoiTrackFit>(n.at("fits"), read<RoiTrackFit>);
  return r;
}

template <>
RoiConfig from_json<RoiConfig>(const Json& j) {
  const Node n(j, "");
  RoiConfig c;
  n.get("min_stddev_px", c.min_stddev_px);
  n.get("mse_thresh", c.mse_thresh);
  n.get("workers", c.workers);
  return c;
}

template <>
KltConfig from_json<KltConfig>(const Json& j) {
  const Node n(j, "");
  KltConfig c;
  if (n.has("grid")) {
    const Node g = n.at("grid").array();
    if (g.size() != 2) g.fail("expected [rows, cols]");
    c.grid_rows = g.at(std::size_t{0}).as_int32();
    c.grid_cols = g.at(std::size_t{1}).as_int32();
  }
  n.get("window", c.window);
  n.get("pyramid_levels", c.pyramid_levels);
  n.get("max_iters", c.max_iters);
  n.get("convergence_eps", c.convergence_eps);
  n.get("max_residual", c.max_residual);
  n.get("min_eigenvalue", c.min_eigenvalue);
  n.get("workers", c.workers);
  return c;
}

template <>
RunReport from_json<RunReport>(const Json& j) {
  const Node n(j, "");
  RunReport r;
  n.get("scene_id", r.scene_id);
  if (n.has("config")) r.config = read<PipelineConfig>(n.at("config"));
  n.get("frame_rate", r.frame_rate);
  if (n.has("image_size")) r.image_size = read<ImageSize>(n.at("image_size"));
  n.get("tracks_total", r.tracks_total);
  n.get("tracks_filtered", r.tracks_filtered);
  r.scores = read_list<ScoredTrack>(n.at("scores"), read<ScoredTrack>);
  r.selected_track_id = n.at("selected_track_id").as_int32();
  r.selected = read<FitResult>(n.at("selected"));
  if (n.has("prediction")) r.prediction = read_list<PredictionPoint>(n.at("prediction"), read<PredictionPoint>);
  if (n.has("errors") && !n.at("errors").json().is_null()) r.errors = read<ParameterErrors>(n.at("errors"));
  n.get("elapsed_s", r.elapsed_s);
  if (n.has("fits")) {
    r.fits = read_list<TrackFit>(n.at("fits"), [](const Node& f) {
      return TrackFit{read<Track2D>(f.at("track")), read<FitResult>(f.at("fit"))};
    });
  }
  return r;
}

std::vector<SceneConfig> scene_configs_from_json(const Json& j) {
  const Node n(j, "");
  if (j.is_array()) return read_list<SceneConfig>(n, read<SceneConfig>);
  return {read<SceneConfig>(n)};
}

}  // namespace vsysid
