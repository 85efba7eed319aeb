#include "guiprep/canonical.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "guiprep/action_grammar.h"

namespace guiprep {
namespace {

std::string describe_type(const Json& j) { return j.type_name(); }

int require_small_int(const Json& j, std::string_view field) {
  const auto v = require_int(j, field);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw FormatError("field '" + std::string(field) + "' is out of range");
  }
  return static_cast<int>(v);
}

}  // namespace

std::string json_string(std::string_view s) {
  return Json(std::string(s)).dump(-1, ' ', false, Json::error_handler_t::replace);
}

void JsonLine::key(std::string_view k) {
  if (body_.size() > 1) body_.push_back(',');
  body_ += json_string(k);
  body_.push_back(':');
}

JsonLine& JsonLine::field(std::string_view k, std::string_view value) {
  key(k);
  body_ += json_string(value);
  return *this;
}

JsonLine& JsonLine::field(std::string_view k, std::int64_t value) {
  key(k);
  body_ += std::to_string(value);
  return *this;
}

JsonLine& JsonLine::field(std::string_view k, bool value) {
  key(k);
  body_ += value ? "true" : "false";
  return *this;
}

JsonLine& JsonLine::field(std::string_view k,
                          const std::optional<std::string>& value) {
  return value ? field(k, std::string_view(*value)) : null(k);
}

JsonLine& JsonLine::raw(std::string_view k, std::string_view json) {
  key(k);
  body_ += json;
  return *this;
}

JsonLine& JsonLine::null(std::string_view k) { return raw(k, "null"); }

std::string screen_json(const ScreenSize& s) {
  return JsonLine().field("width", s.width()).field("height", s.height()).str();
}

std::string point_json(NormPoint p) {
  return "{\"x\":" + format_milli(p.x_milli()) +
         ",\"y\":" + format_milli(p.y_milli()) + "}";
}

std::string box_json(const BBox& b) {
  return JsonLine()
      .field("x1", b.x1)
      .field("y1", b.y1)
      .field("x2", b.x2)
      .field("y2", b.y2)
      .str();
}

std::string to_jsonl(const GroundingRecord& r) {
  JsonLine line;
  line.field("screenshot_ref", r.screenshot_ref)
      .raw("screen", screen_json(r.screen))
      .field("element_desc", r.element_desc);
  if (r.target_box) {
    line.raw("target_box", box_json(*r.target_box));
  } else {
    line.null("target_box");
  }
  return line.raw("target_point", point_json(r.target_point))
      .field("source_tag", r.source_tag)
      .field("synthesis_kind", synthesis_kind_name(r.synthesis_kind))
      .str();
}

std::string to_jsonl(const Trajectory& t) {
  std::string steps = "[";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    if (i > 0) steps.push_back(',');
    const std::string obs =
        JsonLine()
            .field("screenshot_ref", s.observation.screenshot_ref)
            .raw("screen", screen_json(s.observation.screen))
            .str();
    steps += JsonLine()
                 .field("index", s.index)
                 .raw("observation", obs)
                 .field("action", serialize_action(s.action))
                 .field("low_level_instruction", s.low_level_instruction)
                 .str();
  }
  steps.push_back(']');
  return JsonLine()
      .field("task", t.task)
      .raw("steps", steps)
      .field("source_tag", t.source_tag)
      .str();
}

const Json& require_member(const Json& j, std::string_view field) {
  if (!j.is_object()) {
    throw FormatError("expected an object containing '" + std::string(field) +
                      "', got " + describe_type(j));
  }
  auto it = j.find(std::string(field));
  if (it == j.end()) {
    throw FormatError("missing field '" + std::string(field) + "'");
  }
  return *it;
}

std::string require_string(const Json& j, std::string_view field) {
  const Json& v = require_member(j, field);
  if (!v.is_string()) {
    throw FormatError("field '" + std::string(field) + "' must be a string");
  }
  return v.get<std::string>();
}

std::int64_t require_int(const Json& j, std::string_view field) {
  const Json& v = require_member(j, field);
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::fabs(d) < 9e15) {
      return static_cast<std::int64_t>(d);
    }
  }
  throw FormatError("field '" + std::string(field) + "' must be an integer");
}

std::optional<std::string> optional_string(const Json& j,
                                           std::string_view field) {
  if (!j.is_object()) return std::nullopt;
  auto it = j.find(std::string(field));
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw FormatError("field '" + std::string(field) +
                      "' must be a string or null");
  }
  return it->get<std::string>();
}

ScreenSize screen_from_json(const Json& j, std::string_view field) {
  const Json& v = require_member(j, field);
  const int w = require_small_int(v, "width");
  const int h = require_small_int(v, "height");
  if (w < 1 || h < 1) {
    throw FormatError("field '" + std::string(field) +
                      "' must have positive width and height");
  }
  return ScreenSize(w, h);
}

NormPoint point_from_json(const Json& j, std::string_view field) {
  const Json& v = require_member(j, field);
  const Json& x = require_member(v, "x");
  const Json& y = require_member(v, "y");
  if (!x.is_number() || !y.is_number()) {
    throw FormatError("field '" + std::string(field) + "' needs numeric x and y");
  }
  try {
    return NormPoint::quantize(x.get<double>(), y.get<double>());
  } catch (const std::out_of_range&) {
    throw FormatError("field '" + std::string(field) + "' is outside [0,1]");
  }
}

BBox box_from_json(const Json& j, std::string_view field) {
  const Json& v = require_member(j, field);
  return BBox{require_small_int(v, "x1"), require_small_int(v, "y1"),
              require_small_int(v, "x2"), require_small_int(v, "y2")};
}

Action action_from_json(const Json& j, std::string_view field) {
  const std::string text = require_string(j, field);
  auto parsed = parse_action(text);
  if (auto* err = std::get_if<ParseError>(&parsed)) {
    throw FormatError("field '" + std::string(field) + "': " + err->describe());
  }
  return std::get<Action>(std::move(parsed));
}

GroundingRecord grounding_from_json(const Json& j) {
  const auto kind_text = require_string(j, "synthesis_kind");
  const auto kind = synthesis_kind_from_name(kind_text);
  if (!kind) throw FormatError("field 'synthesis_kind' has unknown value");
  std::optional<BBox> box;
  if (auto it = j.find("target_box"); it != j.end() && !it->is_null()) {
    box = box_from_json(j, "target_box");
  }
  return GroundingRecord{require_string(j, "screenshot_ref"),
                         screen_from_json(j, "screen"),
                         require_string(j, "element_desc"),
                         box,
                         point_from_json(j, "target_point"),
                         require_string(j, "source_tag"),
                         *kind};
}

Trajectory trajectory_from_json(const Json& j) {
  Trajectory t{require_string(j, "task"), {}, require_string(j, "source_tag")};
  const Json& steps = require_member(j, "steps");
  if (!steps.is_array()) throw FormatError("field 'steps' must be an array");
  for (const Json& s : steps) {
    const Json& obs = require_member(s, "observation");
    t.steps.push_back(Step{require_small_int(s, "index"),
                           Observation{require_string(obs, "screenshot_ref"),
                                       screen_from_json(obs, "screen")},
                           action_from_json(s, "action"),
                           optional_string(s, "low_level_instruction")});
  }
  return t;
}

std::filesystem::path resolve_resource(std::string_view ref,
                                       const std::filesystem::path& base) {
  constexpr std::string_view kFileScheme = "file://";
  std::string_view local = ref;
  if (ref.substr(0, kFileScheme.size()) == kFileScheme) {
    local = ref.substr(kFileScheme.size());
  } else if (auto colon = ref.find("://"); colon != std::string_view::npos) {
    throw InputError("unsupported resource scheme in '" + std::string(ref) +
                     "' (only local paths and file:// are supported)");
  }
  std::filesystem::path p{std::string(local)};
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw InputError("error while reading '" + path.string() + "'");
  return lines;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError("error while writing '" + path.string() + "'");
}

void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines) {
  std::string text;
  for (const auto& l : lines) {
    text += l;
    text.push_back('\n');
  }
  write_text(path, text);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace guiprep
