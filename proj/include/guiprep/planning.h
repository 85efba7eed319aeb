#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "guiprep/canonical.h"
#include "guiprep/ingest.h"
#include "guiprep/records.h"
#include "guiprep/templates.h"

namespace guiprep {

// How earlier steps are described to the model: their low-level
// natural-language instructions, or their serialized action expressions.
enum class HistoryMode { Instruction, Action };

std::string_view history_mode_name(HistoryMode m);
std::optional<HistoryMode> history_mode_from_name(std::string_view name);

// Assets needed to render planning samples.
struct PlanningTemplates {
  InstructionTemplates instructions;
  PromptTemplate prompt;

  // Loads instruction_fallback_v1.json and planning_prompt_v1.txt from dir.
  static PlanningTemplates load(const std::filesystem::path& dir);
};

struct PlanningSample {
  std::string sample_id;
  std::string task;
  std::string history_text;
  std::string current_screenshot_ref;
  ScreenSize screen;
  int step_index = 1;
  Action target_forward;
  std::optional<Action> target_back;  // present iff step_index >= 2 (hybrid)
  HistoryMode history_mode = HistoryMode::Action;
  std::string rendered_target;
  std::string prompt;
  // Screenshots of steps 1..n-1, for trainers that consume prior frames.
  std::vector<std::string> history_screenshot_refs;
};

inline constexpr std::string_view kNextActionLabel = "Next action: ";
inline constexpr std::string_view kPreviousActionLabel = "Previous action: ";

// Numbered lines "k. ..." for the given steps, or "None." when empty.
std::string render_history(std::span<const Step> prefix, HistoryMode mode,
                           const InstructionTemplates& instructions);

std::string render_forward_target(const Action& next);
std::string render_hybrid_target(const Action& previous, const Action& next);

// step is 1-based; throws std::out_of_range outside [1, steps.size()].
// The default sample_id is "<source_tag>/<ordinal>/<step>".
PlanningSample make_forward_sample(const Trajectory& t, int step, HistoryMode mode,
                                   const PlanningTemplates& tmpl, int ordinal = 1);
PlanningSample make_hybrid_sample(const Trajectory& t, int step, HistoryMode mode,
                                  const PlanningTemplates& tmpl, int ordinal = 1);

struct TransformConfig {
  HistoryMode mode = HistoryMode::Action;
  bool hybrid = false;
};

struct TransformResult {
  std::vector<PlanningSample> samples;
  // Invalid trajectories are skipped; line is the 1-based input position.
  std::vector<Rejection> skipped;
};

// One sample per step. Trajectory ordinals count per source_tag in input
// order, starting at 1.
TransformResult transform_corpus(const std::vector<Trajectory>& trajectories,
                                 const TransformConfig& cfg,
                                 const PlanningTemplates& tmpl);

std::string to_jsonl(const PlanningSample& s);
PlanningSample planning_sample_from_json(const Json& j);

}  // namespace guiprep
