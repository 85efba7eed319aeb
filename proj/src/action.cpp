#include "guiprep/action.h"

#include <stdexcept>

namespace guiprep {
namespace {

constexpr std::array<std::string_view, kActionKindCount> kKindNames = {
    "click",         "long_press",    "type",
    "scroll",        "open_app",      "navigate_back",
    "navigate_home", "wait",          "terminate",
};

constexpr std::array<std::string_view, 4> kDirectionNames = {"up", "down",
                                                             "left", "right"};
constexpr std::array<std::string_view, 2> kStatusNames = {"success",
                                                          "failure"};

bool is_identifier(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  for (char c : s) {
    if (!((c >= 'a' && c <= 'z') || c == '_')) return false;
  }
  return true;
}

}  // namespace

std::optional<NormPoint> Action::point() const {
  if (const auto* c = get_if<act::Click>()) return c->point;
  if (const auto* lp = get_if<act::LongPress>()) return lp->point;
  return std::nullopt;
}

std::string_view kind_name(ActionKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<ActionKind> kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

bool kind_has_point(ActionKind kind) {
  return kind == ActionKind::Click || kind == ActionKind::LongPress;
}

std::string_view direction_name(ScrollDirection d) {
  return kDirectionNames[static_cast<std::size_t>(d)];
}

std::optional<ScrollDirection> direction_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kDirectionNames.size(); ++i) {
    if (kDirectionNames[i] == name) return static_cast<ScrollDirection>(i);
  }
  return std::nullopt;
}

std::string_view status_name(TerminateStatus s) {
  return kStatusNames[static_cast<std::size_t>(s)];
}

std::optional<TerminateStatus> status_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == name) return static_cast<TerminateStatus>(i);
  }
  return std::nullopt;
}

ActionRegistry::ActionRegistry() {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    names_.emplace(std::string(kKindNames[i]), static_cast<ActionKind>(i));
  }
}

const ActionRegistry& ActionRegistry::canonical() {
  static const ActionRegistry registry;
  return registry;
}

void ActionRegistry::add_alias(std::string alias, ActionKind kind) {
  if (!is_identifier(alias)) {
    throw std::invalid_argument("action alias must match [a-z][a-z_]*: '" +
                                alias + "'");
  }
  auto [it, inserted] = names_.emplace(alias, kind);
  if (!inserted && it->second != kind) {
    throw std::invalid_argument("action alias '" + alias +
                                "' already maps to " +
                                std::string(kind_name(it->second)));
  }
}

std::optional<ActionKind> ActionRegistry::lookup(std::string_view name) const {
  auto it = names_.find(std::string(name));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

}  // namespace guiprep
