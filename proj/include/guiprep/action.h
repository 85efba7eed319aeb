#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <variant>

#include "guiprep/types.h"

namespace guiprep {

// Kind tags, in the same order as Action::Payload alternatives.
enum class ActionKind {
  Click,
  LongPress,
  Type,
  Scroll,
  OpenApp,
  NavigateBack,
  NavigateHome,
  Wait,
  Terminate,
};

inline constexpr std::size_t kActionKindCount = 9;

enum class ScrollDirection { Up, Down, Left, Right };
enum class TerminateStatus { Success, Failure };

namespace act {

struct Click {
  NormPoint point;
  friend bool operator==(const Click&, const Click&) = default;
};
struct LongPress {
  NormPoint point;
  friend bool operator==(const LongPress&, const LongPress&) = default;
};
struct Type {
  std::string text;
  friend bool operator==(const Type&, const Type&) = default;
};
struct Scroll {
  ScrollDirection direction = ScrollDirection::Down;
  friend bool operator==(const Scroll&, const Scroll&) = default;
};
struct OpenApp {
  std::string name;
  friend bool operator==(const OpenApp&, const OpenApp&) = default;
};
struct NavigateBack {
  friend bool operator==(const NavigateBack&, const NavigateBack&) = default;
};
struct NavigateHome {
  friend bool operator==(const NavigateHome&, const NavigateHome&) = default;
};
struct Wait {
  friend bool operator==(const Wait&, const Wait&) = default;
};
struct Terminate {
  TerminateStatus status = TerminateStatus::Success;
  friend bool operator==(const Terminate&, const Terminate&) = default;
};

}  // namespace act

// One element of the unified action space. The payload alternative fixes
// the kind, so a Click can never carry text and a Wait never a point.
class Action {
 public:
  using Payload =
      std::variant<act::Click, act::LongPress, act::Type, act::Scroll,
                   act::OpenApp, act::NavigateBack, act::NavigateHome,
                   act::Wait, act::Terminate>;

  template <typename T>
    requires std::is_constructible_v<Payload, T&&>
  Action(T&& payload) : payload_(std::forward<T>(payload)) {}  // NOLINT

  ActionKind kind() const { return static_cast<ActionKind>(payload_.index()); }
  const Payload& payload() const { return payload_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&payload_);
  }

  // The target point of Click/LongPress; nullopt for every other kind.
  std::optional<NormPoint> point() const;

  friend bool operator==(const Action&, const Action&) = default;

 private:
  Payload payload_;
};

std::string_view kind_name(ActionKind kind);
std::optional<ActionKind> kind_from_name(std::string_view name);
bool kind_has_point(ActionKind kind);

std::string_view direction_name(ScrollDirection d);
std::optional<ScrollDirection> direction_from_name(std::string_view name);
std::string_view status_name(TerminateStatus s);
std::optional<TerminateStatus> status_from_name(std::string_view name);

// Maps surface names to kinds. Starts with the canonical names; extra
// aliases (for datasets that say "tap" or "press_back") can be registered
// at runtime and are honored by the parser and by structured ingest.
class ActionRegistry {
 public:
  ActionRegistry();

  static const ActionRegistry& canonical();

  // Throws std::invalid_argument when the alias is not a valid identifier
  // or already maps to a different kind.
  void add_alias(std::string alias, ActionKind kind);

  std::optional<ActionKind> lookup(std::string_view name) const;

 private:
  std::unordered_map<std::string, ActionKind> names_;
};

}  // namespace guiprep
