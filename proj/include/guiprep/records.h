#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guiprep/action.h"
#include "guiprep/types.h"

namespace guiprep {

struct Observation {
  std::string screenshot_ref;
  ScreenSize screen;
};

struct Step {
  int index = 1;
  Observation observation;
  Action action;
  std::optional<std::string> low_level_instruction;
};

struct Trajectory {
  std::string task;
  std::vector<Step> steps;
  std::string source_tag;
};

enum class SynthesisKind { Referring, Contextual, Functional, Unspecified };

std::string_view synthesis_kind_name(SynthesisKind k);
std::optional<SynthesisKind> synthesis_kind_from_name(std::string_view name);

struct GroundingRecord {
  std::string screenshot_ref;
  ScreenSize screen;
  std::string element_desc;
  std::optional<BBox> target_box;
  NormPoint target_point;
  std::string source_tag;
  SynthesisKind synthesis_kind = SynthesisKind::Unspecified;
};

// One broken trajectory rule. step_index is 0 for trajectory-level rules.
struct TrajectoryViolation {
  int step_index = 0;
  std::string rule;
  std::string message;

  std::string describe() const;
};

// Rule identifiers reported in TrajectoryViolation::rule.
namespace rule {
inline constexpr std::string_view kEmptySteps = "empty-steps";
inline constexpr std::string_view kIndexGap = "index-gap";
inline constexpr std::string_view kIndexOrder = "index-order";
inline constexpr std::string_view kPrematureTerminate = "premature-terminate";
inline constexpr std::string_view kEmptyInstruction = "empty-instruction";
inline constexpr std::string_view kEmptyScreenshot = "empty-screenshot-ref";
}  // namespace rule

// Empty result iff the trajectory satisfies every structural invariant.
std::vector<TrajectoryViolation> validate_trajectory(const Trajectory& t);

// Empty string iff the record is valid.
std::string validate_grounding_record(const GroundingRecord& r);

std::string trim(std::string_view s);

}  // namespace guiprep
