#include "guiprep/ingest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <set>

#include "guiprep/action_grammar.h"
#include "guiprep/geometry.h"

namespace guiprep {
namespace {

// Per-record failure; becomes a Rejection with the line number attached.
struct Reject {
  std::string reason;
};

constexpr std::array<std::string_view, 7> kGroundingFields = {
    "screenshot_ref", "screen",     "element_desc",  "target_box",
    "target_point",   "source_tag", "synthesis_kind"};
constexpr std::array<std::string_view, 4> kTrajectoryFields = {
    "task", "steps", "step", "source_tag"};
constexpr std::array<std::string_view, 12> kStepFields = {
    "screenshot_ref", "screen", "action",    "action_type",
    "point",          "x",      "y",         "text",
    "direction",      "app_name", "status",  "low_level_instruction"};

template <std::size_t N>
bool one_of(const std::array<std::string_view, N>& names, std::string_view k) {
  return std::find(names.begin(), names.end(), k) != names.end();
}

std::optional<CoordinateSpace> coordinate_space_from_name(std::string_view s) {
  if (s == "absolute_pixels") return CoordinateSpace::AbsolutePixels;
  if (s == "relative_1000") return CoordinateSpace::Relative1000;
  if (s == "unit") return CoordinateSpace::Unit;
  return std::nullopt;
}

FieldSpec parse_field_spec(const Json& v, const std::string& where) {
  FieldSpec spec;
  auto set_pointer = [&](const Json& p) {
    if (!p.is_string()) throw ManifestError(where + ": pointer must be a string");
    const auto text = p.get<std::string>();
    try {
      Json::json_pointer check(text);
    } catch (const Json::exception&) {
      throw ManifestError(where + ": invalid JSON pointer '" + text + "'");
    }
    spec.pointer = text;
  };
  if (v.is_string()) {
    set_pointer(v);
  } else if (v.is_object() && v.contains("const")) {
    spec.fallback = v.at("const");
  } else if (v.is_object() && v.contains("path")) {
    set_pointer(v.at("path"));
    if (v.contains("default")) spec.fallback = v.at("default");
  } else if (v.is_object() && !v.empty()) {
    for (const auto& [key, child] : v.items()) {
      spec.children.emplace(key, parse_field_spec(child, where + "." + key));
    }
  } else {
    throw ManifestError(where + ": expected a JSON pointer string, "
                                "{\"path\": ...}, {\"const\": ...} or an object "
                                "of sub-fields");
  }
  return spec;
}

SourceManifest parse_one_manifest(const Json& obj, std::size_t index,
                                  const std::filesystem::path& base_dir) {
  const std::string where = "manifest[" + std::to_string(index) + "]";
  if (!obj.is_object()) throw ManifestError(where + ": must be an object");
  auto str_field = [&](std::string_view f) -> std::string {
    auto it = obj.find(std::string(f));
    if (it == obj.end() || !it->is_string()) {
      throw ManifestError(where + ": field '" + std::string(f) +
                          "' is required and must be a string");
    }
    return it->get<std::string>();
  };

  SourceManifest m;
  m.base_dir = base_dir;
  m.source_tag = str_field("source_tag");
  if (m.source_tag.empty()) {
    throw ManifestError(where + ": field 'source_tag' must be non-empty");
  }
  const std::string kind = str_field("kind");
  if (kind == "grounding") {
    m.kind = SourceKind::Grounding;
  } else if (kind == "trajectory") {
    m.kind = SourceKind::Trajectory;
  } else {
    throw ManifestError(where + ": field 'kind' must be grounding or trajectory");
  }
  m.path = str_field("path");

  const auto space = coordinate_space_from_name(str_field("coordinate_space"));
  if (!space) {
    throw ManifestError(where + ": field 'coordinate_space' must be one of "
                                "absolute_pixels, relative_1000, unit");
  }
  m.coordinate_space = *space;
  m.box_coordinate_space = *space;
  if (obj.contains("box_coordinate_space")) {
    const auto box_space =
        coordinate_space_from_name(str_field("box_coordinate_space"));
    if (!box_space) {
      throw ManifestError(where + ": field 'box_coordinate_space' is invalid");
    }
    m.box_coordinate_space = *box_space;
  }
  if (obj.contains("synthesis_kind")) {
    const auto sk = synthesis_kind_from_name(str_field("synthesis_kind"));
    if (!sk) throw ManifestError(where + ": field 'synthesis_kind' is invalid");
    m.synthesis_kind = *sk;
  }
  if (auto it = obj.find("action_aliases"); it != obj.end()) {
    if (!it->is_object()) {
      throw ManifestError(where + ": field 'action_aliases' must be an object");
    }
    for (const auto& [alias, target] : it->items()) {
      const auto k = target.is_string() ? kind_from_name(target.get<std::string>())
                                        : std::nullopt;
      if (!k) {
        throw ManifestError(where + ": action_aliases." + alias +
                            " must name a known action");
      }
      m.action_aliases.emplace(alias, *k);
    }
  }

  auto mit = obj.find("mapping");
  if (mit == obj.end() || !mit->is_object()) {
    throw ManifestError(where + ": field 'mapping' is required and must be an object");
  }
  for (const auto& [key, value] : mit->items()) {
    const std::string field_where = where + ".mapping." + key;
    if (m.kind == SourceKind::Grounding) {
      if (!one_of(kGroundingFields, key)) {
        throw ManifestError(field_where + ": unknown canonical field");
      }
      m.mapping.fields.emplace(key, parse_field_spec(value, field_where));
    } else if (key == "step") {
      if (!value.is_object()) throw ManifestError(field_where + ": must be an object");
      for (const auto& [sk, sv] : value.items()) {
        if (!one_of(kStepFields, sk)) {
          throw ManifestError(field_where + "." + sk + ": unknown step field");
        }
        m.mapping.step_fields.emplace(sk, parse_field_spec(sv, field_where + "." + sk));
      }
    } else {
      if (!one_of(kTrajectoryFields, key)) {
        throw ManifestError(field_where + ": unknown canonical field");
      }
      m.mapping.fields.emplace(key, parse_field_spec(value, field_where));
    }
  }

  auto require = [&](bool present, std::string_view field) {
    if (!present) {
      throw ManifestError(where + ": mapping is missing required field '" +
                          std::string(field) + "'");
    }
  };
  const FieldMapping& map = m.mapping;
  if (m.kind == SourceKind::Grounding) {
    require(map.find("screenshot_ref"), "screenshot_ref");
    require(map.find("screen"), "screen");
    require(map.find("element_desc"), "element_desc");
    require(map.find("target_box") || map.find("target_point"),
            "target_box|target_point");
  } else {
    require(map.find("task"), "task");
    require(map.find("steps"), "steps");
    require(map.find_step("screenshot_ref"), "step.screenshot_ref");
    require(map.find_step("screen"), "step.screen");
    require(map.find_step("action") || map.find_step("action_type"),
            "step.action|step.action_type");
  }
  return m;
}

// ---- value coercion -------------------------------------------------------

std::string as_string(const Json& v, std::string_view field) {
  if (!v.is_string()) throw Reject{std::string(field) + " must be a string"};
  return v.get<std::string>();
}

double as_number(const Json& v, std::string_view field) {
  if (!v.is_number()) throw Reject{std::string(field) + " must be a number"};
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Reject{std::string(field) + " is not finite"};
  return d;
}

// Object with the given keys, or an array of the same length.
template <std::size_t N>
std::array<double, N> as_numbers(const Json& v, std::string_view field,
                                 const std::array<std::string_view, N>& keys) {
  std::array<double, N> out{};
  if (v.is_array()) {
    if (v.size() != N) {
      throw Reject{std::string(field) + " must have " + std::to_string(N) +
                   " elements"};
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = as_number(v[i], field);
    return out;
  }
  if (v.is_object()) {
    for (std::size_t i = 0; i < N; ++i) {
      auto it = v.find(std::string(keys[i]));
      if (it == v.end()) {
        throw Reject{std::string(field) + " is missing '" +
                     std::string(keys[i]) + "'"};
      }
      out[i] = as_number(*it, field);
    }
    return out;
  }
  throw Reject{std::string(field) + " must be an array or object"};
}

int round_pixel(double v, std::string_view field) {
  const double r = std::round(v);
  if (r < -1e9 || r > 1e9) throw Reject{std::string(field) + " is out of range"};
  return static_cast<int>(r);
}

ScreenSize as_screen(const Json& v) {
  const auto wh = as_numbers<2>(v, "screen", {"width", "height"});
  const int w = round_pixel(wh[0], "screen");
  const int h = round_pixel(wh[1], "screen");
  if (w < 1 || h < 1) throw Reject{"screen must have positive width and height"};
  return ScreenSize(w, h);
}

int space_to_pixel(double v, CoordinateSpace space, int extent,
                   std::string_view field) {
  switch (space) {
    case CoordinateSpace::AbsolutePixels:
      return round_pixel(v, field);
    case CoordinateSpace::Relative1000:
      if (v < 0 || v > 1000) throw Reject{std::string(field) + " outside [0,1000]"};
      return scale_to_pixel(v, 1000.0, extent);
    case CoordinateSpace::Unit:
      if (v < 0 || v > 1) throw Reject{std::string(field) + " outside [0,1]"};
      return scale_to_pixel(v, 1.0, extent);
  }
  return 0;
}

NormPoint to_norm_point(double x, double y, CoordinateSpace space,
                        const ScreenSize& screen, std::string_view field) {
  switch (space) {
    case CoordinateSpace::AbsolutePixels: {
      const PixelPoint p{round_pixel(x, field), round_pixel(y, field)};
      try {
        return normalize_point(p, screen);
      } catch (const OutOfBoundsError& e) {
        throw Reject{std::string(field) + ": " + e.what()};
      }
    }
    case CoordinateSpace::Relative1000: {
      const double rx = std::round(x);
      const double ry = std::round(y);
      if (!(rx >= 0 && rx <= 1000 && ry >= 0 && ry <= 1000)) {
        throw Reject{std::string(field) + " outside [0,1000]"};
      }
      return to_unit({static_cast<int>(rx), static_cast<int>(ry)});
    }
    case CoordinateSpace::Unit:
      if (!(x >= 0 && x <= 1 && y >= 0 && y <= 1)) {
        throw Reject{std::string(field) + " outside [0,1]"};
      }
      return NormPoint::quantize(x, y);
  }
  return {};
}

BBox to_pixel_box(const Json& v, CoordinateSpace space, const ScreenSize& s) {
  const auto c = as_numbers<4>(v, "target_box", {"x1", "y1", "x2", "y2"});
  BBox b{space_to_pixel(c[0], space, s.width(), "target_box"),
         space_to_pixel(c[1], space, s.height(), "target_box"),
         space_to_pixel(c[2], space, s.width(), "target_box"),
         space_to_pixel(c[3], space, s.height(), "target_box")};
  if (!b.well_ordered()) throw Reject{"target_box corners are not ordered"};
  if (!b.within(s)) throw Reject{"target_box extends outside the screen"};
  return b;
}

std::optional<Json> resolve(const FieldSpec* spec, const Json& record) {
  if (!spec) return std::nullopt;
  return spec->resolve(record);
}

Json require_value(const FieldSpec* spec, const Json& record,
                   std::string_view field) {
  auto v = resolve(spec, record);
  if (!v) throw Reject{"missing " + std::string(field)};
  return *v;
}

Json parse_line(const std::string& line) {
  if (trim(line).empty()) throw Reject{"empty line"};
  Json j = Json::parse(line, nullptr, false);
  if (j.is_discarded()) throw Reject{"invalid JSON"};
  return j;
}

// ---- per-line conversion ---------------------------------------------------

GroundingRecord convert_grounding(const SourceManifest& m, const Json& rec) {
  const FieldMapping& map = m.mapping;
  std::string ref = as_string(
      require_value(map.find("screenshot_ref"), rec, "screenshot_ref"),
      "screenshot_ref");
  if (ref.empty()) throw Reject{"screenshot_ref is empty"};
  const ScreenSize screen = as_screen(require_value(map.find("screen"), rec, "screen"));
  std::string desc = as_string(
      require_value(map.find("element_desc"), rec, "element_desc"), "element_desc");
  if (trim(desc).empty()) throw Reject{"element_desc is empty"};

  std::optional<BBox> box;
  NormPoint point;
  if (auto v = resolve(map.find("target_box"), rec)) {
    box = to_pixel_box(*v, m.box_coordinate_space, screen);
    point = normalize_point(box_center(*box), screen);
  } else if (auto p = resolve(map.find("target_point"), rec)) {
    const auto xy = as_numbers<2>(*p, "target_point", {"x", "y"});
    point = to_norm_point(xy[0], xy[1], m.coordinate_space, screen, "target_point");
  } else {
    throw Reject{"record has neither target_box nor target_point"};
  }

  std::string tag = m.source_tag;
  if (auto v = resolve(map.find("source_tag"), rec)) {
    tag = as_string(*v, "source_tag");
    if (tag.empty()) throw Reject{"source_tag is empty"};
  }
  SynthesisKind kind = m.synthesis_kind;
  if (auto v = resolve(map.find("synthesis_kind"), rec)) {
    const auto k = synthesis_kind_from_name(as_string(*v, "synthesis_kind"));
    if (!k) throw Reject{"unknown synthesis_kind"};
    kind = *k;
  }

  GroundingRecord out{std::move(ref), screen,          std::move(desc), box,
                      point,          std::move(tag),  kind};
  if (auto err = validate_grounding_record(out); !err.empty()) throw Reject{err};
  return out;
}

Action structured_action(const SourceManifest& m, const ActionRegistry& registry,
                         const Json& step, const ScreenSize& screen) {
  const FieldMapping& map = m.mapping;
  const std::string type =
      as_string(require_value(map.find_step("action_type"), step, "action_type"),
                "action_type");
  const auto kind = registry.lookup(type);
  if (!kind) throw Reject{"unknown action type '" + type + "'"};

  auto text_arg = [&](std::string_view field) {
    return as_string(require_value(map.find_step(field), step, field), field);
  };
  switch (*kind) {
    case ActionKind::Click:
    case ActionKind::LongPress: {
      double x = 0;
      double y = 0;
      if (auto p = resolve(map.find_step("point"), step)) {
        const auto xy = as_numbers<2>(*p, "point", {"x", "y"});
        x = xy[0];
        y = xy[1];
      } else {
        x = as_number(require_value(map.find_step("x"), step, "x"), "x");
        y = as_number(require_value(map.find_step("y"), step, "y"), "y");
      }
      const NormPoint n = to_norm_point(x, y, m.coordinate_space, screen, "point");
      if (*kind == ActionKind::Click) return act::Click{n};
      return act::LongPress{n};
    }
    case ActionKind::Type:
      return act::Type{text_arg("text")};
    case ActionKind::Scroll: {
      const auto d = direction_from_name(text_arg("direction"));
      if (!d) throw Reject{"invalid scroll direction"};
      return act::Scroll{*d};
    }
    case ActionKind::OpenApp:
      return act::OpenApp{text_arg("app_name")};
    case ActionKind::Terminate: {
      const auto s = status_from_name(text_arg("status"));
      if (!s) throw Reject{"invalid terminate status"};
      return act::Terminate{*s};
    }
    case ActionKind::NavigateBack:
      return act::NavigateBack{};
    case ActionKind::NavigateHome:
      return act::NavigateHome{};
    case ActionKind::Wait:
      return act::Wait{};
  }
  throw Reject{"unsupported action"};
}

Trajectory convert_trajectory(const SourceManifest& m,
                              const ActionRegistry& registry, const Json& rec) {
  const FieldMapping& map = m.mapping;
  Trajectory t{as_string(require_value(map.find("task"), rec, "task"), "task"),
               {},
               m.source_tag};
  if (auto v = resolve(map.find("source_tag"), rec)) {
    t.source_tag = as_string(*v, "source_tag");
    if (t.source_tag.empty()) throw Reject{"source_tag is empty"};
  }
  const Json steps = require_value(map.find("steps"), rec, "steps");
  if (!steps.is_array()) throw Reject{"steps must be an array"};

  int index = 0;
  for (const Json& step : steps) {
    ++index;
    try {
      std::string ref = as_string(
          require_value(map.find_step("screenshot_ref"), step, "screenshot_ref"),
          "screenshot_ref");
      const ScreenSize screen =
          as_screen(require_value(map.find_step("screen"), step, "screen"));
      std::optional<Action> action;
      if (auto text = resolve(map.find_step("action"), step)) {
        auto parsed = parse_action(as_string(*text, "action"), registry);
        if (auto* err = std::get_if<ParseError>(&parsed)) {
          throw Reject{"action " + err->describe()};
        }
        action = std::get<Action>(std::move(parsed));
      } else {
        action = structured_action(m, registry, step, screen);
      }
      std::optional<std::string> instruction;
      if (auto v = resolve(map.find_step("low_level_instruction"), step)) {
        instruction = as_string(*v, "low_level_instruction");
      }
      t.steps.push_back(Step{index, Observation{std::move(ref), screen},
                             std::move(*action), std::move(instruction)});
    } catch (const Reject& r) {
      throw Reject{"step " + std::to_string(index) + ": " + r.reason};
    }
  }

  const auto violations = validate_trajectory(t);
  if (!violations.empty()) {
    std::string reason;
    for (const auto& v : violations) {
      if (!reason.empty()) reason += "; ";
      reason += v.describe();
    }
    throw Reject{reason};
  }
  return t;
}

template <typename Record, typename Convert>
IngestResult<Record> run_ingest(const SourceManifest& m,
                                const IngestOptions& opts, Convert convert) {
  const std::vector<std::string> lines = read_lines(m.resolved_path());
  using Outcome = std::variant<Record, Rejection>;

  auto process = [&](std::size_t begin, std::size_t end) {
    std::vector<Outcome> out;
    out.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out.emplace_back(convert(parse_line(lines[i])));
      } catch (const Reject& r) {
        out.emplace_back(Rejection{m.source_tag, i + 1, r.reason});
      } catch (const std::exception& e) {
        out.emplace_back(Rejection{m.source_tag, i + 1, e.what()});
      }
    }
    return out;
  };

  const std::size_t n = lines.size();
  const std::size_t shards =
      std::clamp<std::size_t>(opts.workers, 1, std::max<std::size_t>(n, 1));
  std::vector<std::future<std::vector<Outcome>>> futures;
  for (std::size_t s = 0; s < shards; ++s) {
    const std::size_t begin = n * s / shards;
    const std::size_t end = n * (s + 1) / shards;
    futures.push_back(std::async(shards == 1 ? std::launch::deferred
                                             : std::launch::async,
                                 process, begin, end));
  }

  IngestResult<Record> result;
  result.source_lines = n;
  for (auto& f : futures) {
    for (auto& outcome : f.get()) {
      if (auto* r = std::get_if<Record>(&outcome)) {
        result.records.push_back(std::move(*r));
      } else {
        result.rejections.push_back(std::move(std::get<Rejection>(outcome)));
      }
    }
  }
  return result;
}

ActionRegistry registry_for(const SourceManifest& m) {
  ActionRegistry registry;
  for (const auto& [alias, kind] : m.action_aliases) registry.add_alias(alias, kind);
  return registry;
}

}  // namespace

std::string_view source_kind_name(SourceKind k) {
  return k == SourceKind::Grounding ? "grounding" : "trajectory";
}

std::string_view coordinate_space_name(CoordinateSpace c) {
  switch (c) {
    case CoordinateSpace::AbsolutePixels:
      return "absolute_pixels";
    case CoordinateSpace::Relative1000:
      return "relative_1000";
    case CoordinateSpace::Unit:
      return "unit";
  }
  return "absolute_pixels";
}

std::optional<Json> FieldSpec::resolve(const Json& record) const {
  if (!children.empty()) {
    Json obj = Json::object();
    for (const auto& [key, child] : children) {
      auto v = child.resolve(record);
      if (!v) return std::nullopt;
      obj[key] = std::move(*v);
    }
    return obj;
  }
  if (pointer) {
    const Json::json_pointer ptr(*pointer);
    if (record.contains(ptr)) {
      const Json& v = record.at(ptr);
      if (!v.is_null()) return v;
    }
  }
  return fallback;
}

const FieldSpec* FieldMapping::find(std::string_view name) const {
  auto it = fields.find(std::string(name));
  return it == fields.end() ? nullptr : &it->second;
}

const FieldSpec* FieldMapping::find_step(std::string_view name) const {
  auto it = step_fields.find(std::string(name));
  return it == step_fields.end() ? nullptr : &it->second;
}

std::filesystem::path SourceManifest::resolved_path() const {
  return resolve_resource(path, base_dir);
}

std::vector<SourceManifest> parse_manifest(const Json& doc,
                                           const std::filesystem::path& base_dir) {
  if (!doc.is_array()) throw ManifestError("manifest must be a JSON array");
  std::vector<SourceManifest> out;
  std::set<std::string> tags;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    SourceManifest m = parse_one_manifest(doc[i], i, base_dir);
    if (!tags.insert(m.source_tag).second) {
      throw ManifestError("duplicate source_tag '" + m.source_tag + "'");
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<SourceManifest> load_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw InputError("manifest file not found: '" + path.string() + "'");
  }
  const Json doc = Json::parse(read_text(path), nullptr, false);
  if (doc.is_discarded()) {
    throw ManifestError("manifest '" + path.string() + "' is not valid JSON");
  }
  return parse_manifest(doc, path.parent_path());
}

std::string to_jsonl(const Rejection& r) {
  return JsonLine()
      .field("source_tag", r.source_tag)
      .field("line", static_cast<std::int64_t>(r.line))
      .field("reason", r.reason)
      .str();
}

IngestResult<GroundingRecord> ingest_grounding(const SourceManifest& m,
                                               const IngestOptions& opts) {
  if (m.kind != SourceKind::Grounding) {
    throw std::invalid_argument("ingest_grounding needs a grounding manifest");
  }
  return run_ingest<GroundingRecord>(
      m, opts, [&](const Json& rec) { return convert_grounding(m, rec); });
}

IngestResult<Trajectory> ingest_trajectories(const SourceManifest& m,
                                             const IngestOptions& opts) {
  if (m.kind != SourceKind::Trajectory) {
    throw std::invalid_argument("ingest_trajectories needs a trajectory manifest");
  }
  const ActionRegistry registry = registry_for(m);
  return run_ingest<Trajectory>(m, opts, [&](const Json& rec) {
    return convert_trajectory(m, registry, rec);
  });
}

SourceManifest identity_grounding_manifest(std::string source_tag,
                                           std::string path) {
  const Json doc = Json::array({{
      {"source_tag", std::move(source_tag)},
      {"kind", "grounding"},
      {"path", std::move(path)},
      {"coordinate_space", "unit"},
      {"box_coordinate_space", "absolute_pixels"},
      {"mapping",
       {{"screenshot_ref", "/screenshot_ref"},
        {"screen", "/screen"},
        {"element_desc", "/element_desc"},
        {"target_box", "/target_box"},
        {"target_point", "/target_point"},
        {"source_tag", "/source_tag"},
        {"synthesis_kind", "/synthesis_kind"}}},
  }});
  return parse_manifest(doc, {}).front();
}

SourceManifest identity_trajectory_manifest(std::string source_tag,
                                            std::string path) {
  const Json doc = Json::array({{
      {"source_tag", std::move(source_tag)},
      {"kind", "trajectory"},
      {"path", std::move(path)},
      {"coordinate_space", "unit"},
      {"mapping",
       {{"task", "/task"},
        {"steps", "/steps"},
        {"source_tag", "/source_tag"},
        {"step",
         {{"screenshot_ref", "/observation/screenshot_ref"},
          {"screen", "/observation/screen"},
          {"action", "/action"},
          {"low_level_instruction", "/low_level_instruction"}}}}},
  }});
  return parse_manifest(doc, {}).front();
}

std::vector<GroundingRecord> read_grounding_jsonl(const std::filesystem::path& p) {
  std::vector<GroundingRecord> out;
  const auto lines = read_lines(p);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      out.push_back(grounding_from_json(Json::parse(lines[i])));
    } catch (const std::exception& e) {
      throw FormatError(p.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<Trajectory> read_trajectories_jsonl(const std::filesystem::path& p) {
  std::vector<Trajectory> out;
  const auto lines = read_lines(p);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    try {
      out.push_back(trajectory_from_json(Json::parse(lines[i])));
    } catch (const std::exception& e) {
      throw FormatError(p.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace guiprep
