#include "guiprep/records.h"

#include <array>

#include "guiprep/geometry.h"

namespace guiprep {
namespace {

constexpr std::array<std::string_view, 4> kSynthesisNames = {
    "referring", "contextual", "functional", "unspecified"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view synthesis_kind_name(SynthesisKind k) {
  return kSynthesisNames[static_cast<std::size_t>(k)];
}

std::optional<SynthesisKind> synthesis_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSynthesisNames.size(); ++i) {
    if (kSynthesisNames[i] == name) return static_cast<SynthesisKind>(i);
  }
  return std::nullopt;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string TrajectoryViolation::describe() const {
  if (step_index == 0) return rule + ": " + message;
  return "step " + std::to_string(step_index) + ": " + rule + ": " + message;
}

std::vector<TrajectoryViolation> validate_trajectory(const Trajectory& t) {
  std::vector<TrajectoryViolation> out;
  if (t.steps.empty()) {
    out.push_back({0, std::string(rule::kEmptySteps),
                   "trajectory has no steps"});
    return out;
  }

  int expected = 1;
  for (const Step& step : t.steps) {
    if (step.index > expected) {
      for (int missing = expected; missing < step.index; ++missing) {
        out.push_back({missing, std::string(rule::kIndexGap),
                       "step index " + std::to_string(missing) +
                           " is missing"});
      }
      expected = step.index + 1;
    } else if (step.index < expected) {
      out.push_back({step.index, std::string(rule::kIndexOrder),
                     "step index " + std::to_string(step.index) +
                         " is out of order or duplicated (expected " +
                         std::to_string(expected) + ")"});
    } else {
      ++expected;
    }
  }

  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& step = t.steps[i];
    if (step.action.kind() == ActionKind::Terminate && i + 1 < t.steps.size()) {
      out.push_back({step.index, std::string(rule::kPrematureTerminate),
                     "terminate is not the final step"});
    }
    if (step.low_level_instruction && trim(*step.low_level_instruction).empty()) {
      out.push_back({step.index, std::string(rule::kEmptyInstruction),
                     "low-level instruction is blank"});
    }
    if (step.observation.screenshot_ref.empty()) {
      out.push_back({step.index, std::string(rule::kEmptyScreenshot),
                     "observation has no screenshot reference"});
    }
  }
  return out;
}

std::string validate_grounding_record(const GroundingRecord& r) {
  if (r.screenshot_ref.empty()) return "screenshot_ref is empty";
  if (trim(r.element_desc).empty()) return "element_desc is empty";
  if (r.target_box && !r.target_box->within(r.screen)) {
    return "target_box is not a well-ordered box inside the screen";
  }
  if (r.target_box &&
      r.target_point != normalize_point(box_center(*r.target_box), r.screen)) {
    return "target_point is not the normalized center of target_box";
  }
  return {};
}

}  // namespace guiprep
