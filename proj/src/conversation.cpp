#include "guiprep/conversation.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "guiprep/action_grammar.h"
#include "guiprep/canonical.h"

namespace guiprep {

std::string render_grounding_prompt(const GroundingRecord& r,
                                    const PromptTemplate& tmpl) {
  return tmpl.render({{"element_desc", r.element_desc}});
}

std::string render_grounding_answer(NormPoint target) {
  return serialize_action(act::Click{target});
}

PackResult build_conversations(const std::vector<GroundingRecord>& records,
                               int max_turns, const PromptTemplate& tmpl) {
  if (max_turns < 1) throw std::invalid_argument("max_turns must be at least 1");

  struct Keyed {
    const GroundingRecord* record;
    std::string line;
  };
  std::map<std::string_view, std::vector<Keyed>> groups;
  for (const auto& r : records) {
    groups[r.screenshot_ref].push_back({&r, to_jsonl(r)});
  }

  PackResult out;
  for (auto& [ref, members] : groups) {
    const ScreenSize screen = members.front().record->screen;
    const bool consistent =
        std::all_of(members.begin(), members.end(),
                    [&](const Keyed& k) { return k.record->screen == screen; });
    if (!consistent) {
      out.rejections.push_back(
          {std::string(ref), members.size(),
           "records disagree on the screen size for this screenshot"});
      continue;
    }
    std::sort(members.begin(), members.end(), [](const Keyed& a, const Keyed& b) {
      if (a.record->element_desc != b.record->element_desc) {
        return a.record->element_desc < b.record->element_desc;
      }
      return a.line < b.line;
    });
    for (std::size_t start = 0; start < members.size();
         start += static_cast<std::size_t>(max_turns)) {
      const std::size_t end =
          std::min(members.size(), start + static_cast<std::size_t>(max_turns));
      Conversation c{std::string(ref), screen, {}};
      c.turns.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        const GroundingRecord& r = *members[i].record;
        c.turns.push_back({render_grounding_prompt(r, tmpl), r.target_point});
      }
      out.conversations.push_back(std::move(c));
    }
  }
  return out;
}

std::string to_jsonl(const Conversation& c) {
  std::string turns = "[";
  for (std::size_t i = 0; i < c.turns.size(); ++i) {
    if (i > 0) turns.push_back(',');
    turns += JsonLine()
                 .field("prompt", c.turns[i].prompt)
                 .field("answer", render_grounding_answer(c.turns[i].answer_point))
                 .raw("answer_point", point_json(c.turns[i].answer_point))
                 .str();
  }
  turns.push_back(']');
  return JsonLine()
      .field("screenshot_ref", c.screenshot_ref)
      .raw("screen", screen_json(c.screen))
      .raw("turns", turns)
      .str();
}

std::string to_jsonl(const GroupRejection& r) {
  return JsonLine()
      .field("screenshot_ref", r.screenshot_ref)
      .field("records", static_cast<std::int64_t>(r.record_count))
      .field("reason", r.reason)
      .str();
}

}  // namespace guiprep
