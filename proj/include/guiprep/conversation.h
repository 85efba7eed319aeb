#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "guiprep/records.h"
#include "guiprep/templates.h"

namespace guiprep {

inline constexpr int kDefaultMaxTurns = 20;

struct ConversationTurn {
  std::string prompt;
  NormPoint answer_point;
};

// Several grounding questions about one screenshot, asked in one session.
struct Conversation {
  std::string screenshot_ref;
  ScreenSize screen;
  std::vector<ConversationTurn> turns;
};

// A screenshot whose records disagree on the screen size.
struct GroupRejection {
  std::string screenshot_ref;
  std::size_t record_count = 0;
  std::string reason;
};

struct PackResult {
  std::vector<Conversation> conversations;
  std::vector<GroupRejection> rejections;
};

std::string render_grounding_prompt(const GroundingRecord& r,
                                    const PromptTemplate& tmpl);

// The answer side of a turn: a canonical click at the target.
std::string render_grounding_answer(NormPoint target);

// Groups by screenshot_ref (output sorted by ref), orders turns by
// element_desc with the canonical record line as tie-break, and splits
// groups into chunks of at most max_turns. Independent of input order.
// Throws std::invalid_argument when max_turns < 1.
PackResult build_conversations(const std::vector<GroundingRecord>& records,
                               int max_turns, const PromptTemplate& tmpl);

std::string to_jsonl(const Conversation& c);
std::string to_jsonl(const GroupRejection& r);

}  // namespace guiprep
