#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "guiprep/records.h"

namespace guiprep {

using Json = nlohmann::json;

// Malformed canonical input. The message names the offending field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fatal I/O or input problem (missing file, unsupported scheme, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds one JSON object with keys in insertion order. Strings are escaped
// by nlohmann/json; raw() splices pre-rendered JSON (canonical points).
class JsonLine {
 public:
  JsonLine& field(std::string_view key, std::string_view value);
  JsonLine& field(std::string_view key, const std::string& value) {
    return field(key, std::string_view(value));
  }
  JsonLine& field(std::string_view key, const char* value) {
    return field(key, std::string_view(value));
  }
  JsonLine& field(std::string_view key, std::int64_t value);
  JsonLine& field(std::string_view key, int value) {
    return field(key, static_cast<std::int64_t>(value));
  }
  JsonLine& field(std::string_view key, bool value);
  JsonLine& field(std::string_view key, const std::optional<std::string>& value);
  JsonLine& raw(std::string_view key, std::string_view json);
  JsonLine& null(std::string_view key);

  std::string str() const { return body_ + "}"; }

 private:
  void key(std::string_view k);
  std::string body_ = "{";
};

std::string json_string(std::string_view s);

std::string screen_json(const ScreenSize& s);
std::string point_json(NormPoint p);
std::string box_json(const BBox& b);

std::string to_jsonl(const GroundingRecord& r);
std::string to_jsonl(const Trajectory& t);

ScreenSize screen_from_json(const Json& j, std::string_view field);
NormPoint point_from_json(const Json& j, std::string_view field);
BBox box_from_json(const Json& j, std::string_view field);
Action action_from_json(const Json& j, std::string_view field);

GroundingRecord grounding_from_json(const Json& j);
Trajectory trajectory_from_json(const Json& j);

// Typed member access with FormatError naming the field.
const Json& require_member(const Json& j, std::string_view field);
std::string require_string(const Json& j, std::string_view field);
std::int64_t require_int(const Json& j, std::string_view field);
std::optional<std::string> optional_string(const Json& j, std::string_view field);

// Resource identifiers: bare paths and file:// URIs are local files; any
// other scheme is rejected with InputError until a backend exists.
std::filesystem::path resolve_resource(std::string_view ref,
                                       const std::filesystem::path& base = {});

// Lines of a text file without terminators; a final newline does not add an
// empty line. Throws InputError when the file cannot be read.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes lines joined by '\n' with a trailing newline when non-empty.
void write_lines(const std::filesystem::path& path,
                 const std::vector<std::string>& lines);
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace guiprep
