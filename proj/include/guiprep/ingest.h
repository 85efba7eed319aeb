#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "guiprep/canonical.h"
#include "guiprep/records.h"

namespace guiprep {

enum class SourceKind { Grounding, Trajectory };
enum class CoordinateSpace { AbsolutePixels, Relative1000, Unit };

std::string_view source_kind_name(SourceKind k);
std::string_view coordinate_space_name(CoordinateSpace c);

// Invalid manifest content; the message names the offending field.
class ManifestError : public InputError {
 public:
  using InputError::InputError;
};

// Where one canonical field comes from. Either a leaf (JSON pointer into the
// source record with an optional fallback, or a constant) or a composite
// whose children assemble an object, e.g. screen = {width: "/w", height: "/h"}.
struct FieldSpec {
  std::optional<std::string> pointer;
  std::optional<Json> fallback;  // used when the pointer is absent or null
  std::map<std::string, FieldSpec> children;

  // nullopt when the value is absent everywhere.
  std::optional<Json> resolve(const Json& record) const;
};

// Canonical field name -> source. Trajectory manifests nest per-step fields
// under "step"; those pointers are relative to each element of "steps".
struct FieldMapping {
  std::map<std::string, FieldSpec> fields;
  std::map<std::string, FieldSpec> step_fields;

  const FieldSpec* find(std::string_view name) const;
  const FieldSpec* find_step(std::string_view name) const;
};

struct SourceManifest {
  std::string source_tag;
  SourceKind kind = SourceKind::Grounding;
  std::string path;
  FieldMapping mapping;
  SynthesisKind synthesis_kind = SynthesisKind::Unspecified;
  CoordinateSpace coordinate_space = CoordinateSpace::AbsolutePixels;
  // Boxes are read in this space; defaults to coordinate_space.
  CoordinateSpace box_coordinate_space = CoordinateSpace::AbsolutePixels;
  // Extra action names for structured or textual actions ("tap" -> click).
  std::map<std::string, ActionKind> action_aliases;
  // Directory relative paths are resolved against.
  std::filesystem::path base_dir;

  std::filesystem::path resolved_path() const;
};

// Parses and validates a manifest document (a JSON array).
std::vector<SourceManifest> parse_manifest(const Json& doc,
                                           const std::filesystem::path& base_dir);

// Reads a manifest file; relative source paths resolve against its directory.
std::vector<SourceManifest> load_manifest(const std::filesystem::path& path);

struct Rejection {
  std::string source_tag;
  std::size_t line = 0;  // 1-based source line
  std::string reason;
};

std::string to_jsonl(const Rejection& r);

template <typename Record>
struct IngestResult {
  std::vector<Record> records;
  std::vector<Rejection> rejections;
  std::size_t source_lines = 0;
};

struct IngestOptions {
  // Source lines are split into this many contiguous shards and processed
  // concurrently; output order is always source line order.
  unsigned workers = 1;
};

IngestResult<GroundingRecord> ingest_grounding(const SourceManifest& m,
                                               const IngestOptions& opts = {});
IngestResult<Trajectory> ingest_trajectories(const SourceManifest& m,
                                             const IngestOptions& opts = {});

// Manifests that read canonical JSONL back unchanged.
SourceManifest identity_grounding_manifest(std::string source_tag,
                                           std::string path);
SourceManifest identity_trajectory_manifest(std::string source_tag,
                                            std::string path);

// Canonical corpora readers (strict: a malformed line is a FormatError
// naming the line).
std::vector<GroundingRecord> read_grounding_jsonl(const std::filesystem::path& p);
std::vector<Trajectory> read_trajectories_jsonl(const std::filesystem::path& p);

}  // namespace guiprep
