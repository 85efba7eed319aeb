#include "guiprep/planning.h"

#include <map>
#include <stdexcept>

#include "guiprep/action_grammar.h"

namespace guiprep {
namespace {

void check_step(const Trajectory& t, int step) {
  if (step < 1 || static_cast<std::size_t>(step) > t.steps.size()) {
    throw std::out_of_range("step " + std::to_string(step) +
                            " outside trajectory of length " +
                            std::to_string(t.steps.size()));
  }
}

std::string render_prompt(const PlanningSample& s, const PlanningTemplates& tmpl,
                          bool hybrid) {
  const auto& objective = hybrid ? tmpl.instructions.hybrid_objective()
                                 : tmpl.instructions.forward_objective();
  return tmpl.prompt.render(
      {{"task", s.task}, {"history", s.history_text}, {"objective", objective}});
}

}  // namespace

std::string_view history_mode_name(HistoryMode m) {
  return m == HistoryMode::Instruction ? "instruction" : "action";
}

std::optional<HistoryMode> history_mode_from_name(std::string_view name) {
  if (name == "instruction") return HistoryMode::Instruction;
  if (name == "action") return HistoryMode::Action;
  return std::nullopt;
}

PlanningTemplates PlanningTemplates::load(const std::filesystem::path& dir) {
  return {InstructionTemplates::load(dir / "instruction_fallback_v1.json"),
          PromptTemplate::load(dir / "planning_prompt_v1.txt")};
}

std::string render_history(std::span<const Step> prefix, HistoryMode mode,
                           const InstructionTemplates& instructions) {
  if (prefix.empty()) return "None.";
  std::string out;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    const Step& step = prefix[k];
    if (k > 0) out.push_back('\n');
    out += std::to_string(k + 1) + ". ";
    if (mode == HistoryMode::Action) {
      out += serialize_action(step.action);
    } else if (step.low_level_instruction) {
      out += *step.low_level_instruction;
    } else {
      out += instructions.render(step.action);
    }
  }
  return out;
}

std::string render_forward_target(const Action& next) {
  return std::string(kNextActionLabel) + serialize_action(next);
}

std::string render_hybrid_target(const Action& previous, const Action& next) {
  return std::string(kPreviousActionLabel) + serialize_action(previous) + "\n" +
         render_forward_target(next);
}

PlanningSample make_forward_sample(const Trajectory& t, int step, HistoryMode mode,
                                   const PlanningTemplates& tmpl, int ordinal) {
  check_step(t, step);
  const Step& current = t.steps[static_cast<std::size_t>(step - 1)];
  const std::span<const Step> prefix(t.steps.data(),
                                     static_cast<std::size_t>(step - 1));
  PlanningSample s{
      t.source_tag + "/" + std::to_string(ordinal) + "/" + std::to_string(step),
      t.task,
      render_history(prefix, mode, tmpl.instructions),
      current.observation.screenshot_ref,
      current.observation.screen,
      step,
      current.action,
      std::nullopt,
      mode,
      render_forward_target(current.action),
      {},
      {}};
  for (const Step& p : prefix) {
    s.history_screenshot_refs.push_back(p.observation.screenshot_ref);
  }
  s.prompt = render_prompt(s, tmpl, false);
  return s;
}

PlanningSample make_hybrid_sample(const Trajectory& t, int step, HistoryMode mode,
                                  const PlanningTemplates& tmpl, int ordinal) {
  PlanningSample s = make_forward_sample(t, step, mode, tmpl, ordinal);
  if (step >= 2) {
    const Action& previous = t.steps[static_cast<std::size_t>(step - 2)].action;
    s.target_back = previous;
    s.rendered_target = render_hybrid_target(previous, s.target_forward);
    s.prompt = render_prompt(s, tmpl, true);
  }
  return s;
}

TransformResult transform_corpus(const std::vector<Trajectory>& trajectories,
                                 const TransformConfig& cfg,
                                 const PlanningTemplates& tmpl) {
  TransformResult out;
  std::map<std::string, int> ordinals;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const Trajectory& t = trajectories[i];
    const int ordinal = ++ordinals[t.source_tag];
    const auto violations = validate_trajectory(t);
    if (!violations.empty()) {
      std::string reason;
      for (const auto& v : violations) {
        if (!reason.empty()) reason += "; ";
        reason += v.describe();
      }
      out.skipped.push_back({t.source_tag, i + 1, reason});
      continue;
    }
    for (int n = 1; n <= static_cast<int>(t.steps.size()); ++n) {
      out.samples.push_back(cfg.hybrid
                                ? make_hybrid_sample(t, n, cfg.mode, tmpl, ordinal)
                                : make_forward_sample(t, n, cfg.mode, tmpl, ordinal));
    }
  }
  return out;
}

std::string to_jsonl(const PlanningSample& s) {
  std::string refs = "[";
  for (std::size_t i = 0; i < s.history_screenshot_refs.size(); ++i) {
    if (i > 0) refs.push_back(',');
    refs += json_string(s.history_screenshot_refs[i]);
  }
  refs.push_back(']');
  JsonLine line;
  line.field("sample_id", s.sample_id)
      .field("task", s.task)
      .field("history_text", s.history_text)
      .field("current_screenshot_ref", s.current_screenshot_ref)
      .raw("screen", screen_json(s.screen))
      .field("step_index", s.step_index)
      .field("target_forward", serialize_action(s.target_forward));
  if (s.target_back) {
    line.field("target_back", serialize_action(*s.target_back));
  } else {
    line.null("target_back");
  }
  return line.field("history_mode", history_mode_name(s.history_mode))
      .field("rendered_target", s.rendered_target)
      .field("prompt", s.prompt)
      .raw("history_screenshot_refs", refs)
      .str();
}

PlanningSample planning_sample_from_json(const Json& j) {
  const auto mode = history_mode_from_name(require_string(j, "history_mode"));
  if (!mode) throw FormatError("field 'history_mode' has unknown value");
  std::optional<Action> back;
  if (auto it = j.find("target_back"); it != j.end() && !it->is_null()) {
    back = action_from_json(j, "target_back");
  }
  const auto step = require_int(j, "step_index");
  if (step < 1 || step > 1'000'000) throw FormatError("field 'step_index' out of range");
  PlanningSample s{require_string(j, "sample_id"),
                   require_string(j, "task"),
                   require_string(j, "history_text"),
                   require_string(j, "current_screenshot_ref"),
                   screen_from_json(j, "screen"),
                   static_cast<int>(step),
                   action_from_json(j, "target_forward"),
                   back,
                   *mode,
                   require_string(j, "rendered_target"),
                   optional_string(j, "prompt").value_or(""),
                   {}};
  if (auto it = j.find("history_screenshot_refs"); it != j.end() && it->is_array()) {
    for (const auto& r : *it) {
      if (r.is_string()) s.history_screenshot_refs.push_back(r.get<std::string>());
    }
  }
  return s;
}

}  // namespace guiprep
