#include "guiprep/action_grammar.h"

#include <algorithm>
#include <array>
#include <optional>

namespace guiprep {
namespace {

constexpr long long kUnitE4 = 10000;
// Integer parts longer than this are saturated; they are out of range anyway.
constexpr long long kSaturateE4 = 1'000'000'000'000LL;

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ident_char(char c) { return is_lower(c) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class ExprParser {
 public:
  explicit ExprParser(std::string_view src) : src_(src) {}

  std::variant<ActionExpr, ParseError> run() {
    ActionExpr expr;
    skip_ws();
    if (!parse_identifier(expr.name)) return fail("expected action name");
    skip_ws();
    if (!consume('(')) return fail("expected '(' after action name");
    skip_ws();
    if (!consume(')')) {
      while (true) {
        ActionExpr::Kwarg kw;
        kw.offset = pos_;
        if (!parse_identifier(kw.key)) return fail("expected argument name");
        const bool duplicate = std::any_of(
            expr.kwargs.begin(), expr.kwargs.end(),
            [&](const ActionExpr::Kwarg& k) { return k.key == kw.key; });
        if (duplicate) {
          return ParseError{ParseErrorKind::Syntax, kw.offset,
                            "duplicate argument '" + kw.key + "'"};
        }
        skip_ws();
        if (!consume('=')) return fail("expected '=' after argument name");
        skip_ws();
        if (auto err = parse_value(kw.value)) return *err;
        expr.kwargs.push_back(std::move(kw));
        skip_ws();
        if (consume(')')) break;
        if (!consume(',')) return fail("expected ',' or ')'");
        skip_ws();
      }
    }
    skip_ws();
    if (pos_ != src_.size()) return fail("unexpected trailing input");
    return expr;
  }

 private:
  ParseError fail(std::string message) const {
    return {ParseErrorKind::Syntax, pos_, std::move(message)};
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return at_end() ? '\0' : src_[pos_]; }

  bool consume(char c) {
    if (!at_end() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_ws() {
    while (!at_end() && is_ws(src_[pos_])) ++pos_;
  }

  bool parse_identifier(std::string& out) {
    if (at_end() || !is_lower(src_[pos_])) return false;
    const std::size_t start = pos_;
    while (!at_end() && is_ident_char(src_[pos_])) ++pos_;
    out.assign(src_.substr(start, pos_ - start));
    return true;
  }

  std::optional<ParseError> parse_value(
      std::variant<ActionExpr::Number, std::string>& out) {
    const char c = peek();
    if (c == '"') {
      std::string s;
      if (auto err = parse_string(s)) return err;
      out = std::move(s);
      return std::nullopt;
    }
    if (c == '-' || c == '.' || is_digit(c)) {
      ActionExpr::Number n;
      if (auto err = parse_number(n)) return err;
      out = n;
      return std::nullopt;
    }
    return fail("expected number or string");
  }

  std::optional<ParseError> parse_string(std::string& out) {
    const std::size_t start = pos_;
    ++pos_;  // opening quote
    while (true) {
      if (at_end()) {
        return ParseError{ParseErrorKind::Syntax, start,
                          "unterminated string"};
      }
      const char c = src_[pos_++];
      if (c == '"') return std::nullopt;
      if (c == '\\') {
        if (at_end()) {
          return ParseError{ParseErrorKind::Syntax, start,
                            "unterminated string"};
        }
        const char e = src_[pos_];
        if (e != '"' && e != '\\') return fail("invalid escape sequence");
        ++pos_;
        out.push_back(e);
      } else {
        out.push_back(c);
      }
    }
  }

  std::optional<ParseError> parse_number(ActionExpr::Number& out) {
    const std::size_t start = pos_;
    const bool negative = consume('-');
    long long int_part = 0;
    int int_digits = 0;
    while (!at_end() && is_digit(src_[pos_])) {
      if (int_part < kSaturateE4) int_part = int_part * 10 + (src_[pos_] - '0');
      ++int_digits;
      ++pos_;
    }
    long long frac = 0;
    int frac_digits = 0;
    if (consume('.')) {
      while (!at_end() && is_digit(src_[pos_])) {
        if (frac_digits == 4) {
          return ParseError{ParseErrorKind::Syntax, start,
                            "number has more than 4 decimal places"};
        }
        frac = frac * 10 + (src_[pos_] - '0');
        ++frac_digits;
        ++pos_;
      }
      if (frac_digits == 0) {
        return ParseError{ParseErrorKind::Syntax, start,
                          "expected digits after decimal point"};
      }
    }
    if (int_digits == 0 && frac_digits == 0) {
      return ParseError{ParseErrorKind::Syntax, start, "malformed number"};
    }
    for (int i = frac_digits; i < 4; ++i) frac *= 10;
    long long value = std::min(int_part, kSaturateE4) * kUnitE4 + frac;
    out.value_e4 = negative ? -value : value;
    return std::nullopt;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

enum class ArgType { Coordinate, Text, Direction, Status };

struct ArgSpec {
  std::string_view key;
  ArgType type;
};

std::vector<ArgSpec> schema_for(ActionKind kind) {
  switch (kind) {
    case ActionKind::Click:
    case ActionKind::LongPress:
      return {{"x", ArgType::Coordinate}, {"y", ArgType::Coordinate}};
    case ActionKind::Type:
      return {{"text", ArgType::Text}};
    case ActionKind::Scroll:
      return {{"direction", ArgType::Direction}};
    case ActionKind::OpenApp:
      return {{"name", ArgType::Text}};
    case ActionKind::Terminate:
      return {{"status", ArgType::Status}};
    case ActionKind::NavigateBack:
    case ActionKind::NavigateHome:
    case ActionKind::Wait:
      return {};
  }
  return {};
}

const ActionExpr::Kwarg* find_kwarg(const ActionExpr& e, std::string_view key) {
  for (const auto& kw : e.kwargs) {
    if (kw.key == key) return &kw;
  }
  return nullptr;
}

ParseResult build_action(const ActionExpr& expr, std::size_t name_offset,
                         const ActionRegistry& registry) {
  const auto kind = registry.lookup(expr.name);
  if (!kind) {
    return ParseError{ParseErrorKind::UnknownAction, name_offset,
                      "unknown action '" + expr.name + "'"};
  }
  const auto schema = schema_for(*kind);
  for (const auto& kw : expr.kwargs) {
    const bool known = std::any_of(schema.begin(), schema.end(),
                                   [&](const ArgSpec& a) { return a.key == kw.key; });
    if (!known) {
      return ParseError{ParseErrorKind::BadArguments, kw.offset,
                        "unexpected argument '" + kw.key + "' for " +
                            std::string(kind_name(*kind))};
    }
  }
  for (const auto& arg : schema) {
    if (!find_kwarg(expr, arg.key)) {
      return ParseError{ParseErrorKind::BadArguments, name_offset,
                        "missing argument '" + std::string(arg.key) +
                            "' for " + std::string(kind_name(*kind))};
    }
  }

  // Type checks come before range checks so the error class is stable.
  for (const auto& arg : schema) {
    const auto* kw = find_kwarg(expr, arg.key);
    const bool is_number = std::holds_alternative<ActionExpr::Number>(kw->value);
    if ((arg.type == ArgType::Coordinate) != is_number) {
      return ParseError{ParseErrorKind::BadArguments, kw->offset,
                        "argument '" + kw->key + "' must be a " +
                            (is_number ? "string" : "number")};
    }
    if (arg.type == ArgType::Direction &&
        !direction_from_name(std::get<std::string>(kw->value))) {
      return ParseError{ParseErrorKind::BadArguments, kw->offset,
                        "direction must be one of up, down, left, right"};
    }
    if (arg.type == ArgType::Status &&
        !status_from_name(std::get<std::string>(kw->value))) {
      return ParseError{ParseErrorKind::BadArguments, kw->offset,
                        "status must be success or failure"};
    }
  }

  auto coordinate = [&](std::string_view key, int& milli) -> std::optional<ParseError> {
    const auto* kw = find_kwarg(expr, key);
    const long long v = std::get<ActionExpr::Number>(kw->value).value_e4;
    if (v < 0 || v > kUnitE4) {
      return ParseError{ParseErrorKind::CoordinateRange, kw->offset,
                        "coordinate '" + kw->key + "' outside [0, 1]"};
    }
    milli = static_cast<int>((v + 5) / 10);
    return std::nullopt;
  };
  auto text = [&](std::string_view key) -> const std::string& {
    return std::get<std::string>(find_kwarg(expr, key)->value);
  };

  switch (*kind) {
    case ActionKind::Click:
    case ActionKind::LongPress: {
      int x = 0;
      int y = 0;
      if (auto err = coordinate("x", x)) return *err;
      if (auto err = coordinate("y", y)) return *err;
      const NormPoint p = NormPoint::from_milli(x, y);
      if (*kind == ActionKind::Click) return Action(act::Click{p});
      return Action(act::LongPress{p});
    }
    case ActionKind::Type:
      return Action(act::Type{text("text")});
    case ActionKind::Scroll:
      return Action(act::Scroll{*direction_from_name(text("direction"))});
    case ActionKind::OpenApp:
      return Action(act::OpenApp{text("name")});
    case ActionKind::Terminate:
      return Action(act::Terminate{*status_from_name(text("status"))});
    case ActionKind::NavigateBack:
      return Action(act::NavigateBack{});
    case ActionKind::NavigateHome:
      return Action(act::NavigateHome{});
    case ActionKind::Wait:
      return Action(act::Wait{});
  }
  return ParseError{ParseErrorKind::UnknownAction, name_offset, "unreachable"};
}

struct Serializer {
  std::string operator()(const act::Click& a) const { return point("click", a.point); }
  std::string operator()(const act::LongPress& a) const {
    return point("long_press", a.point);
  }
  std::string operator()(const act::Type& a) const {
    return "type(text=" + quote_string(a.text) + ")";
  }
  std::string operator()(const act::Scroll& a) const {
    return "scroll(direction=" + quote_string(direction_name(a.direction)) + ")";
  }
  std::string operator()(const act::OpenApp& a) const {
    return "open_app(name=" + quote_string(a.name) + ")";
  }
  std::string operator()(const act::NavigateBack&) const { return "navigate_back()"; }
  std::string operator()(const act::NavigateHome&) const { return "navigate_home()"; }
  std::string operator()(const act::Wait&) const { return "wait()"; }
  std::string operator()(const act::Terminate& a) const {
    return "terminate(status=" + quote_string(status_name(a.status)) + ")";
  }

  static std::string point(std::string_view name, NormPoint p) {
    return std::string(name) + "(x=" + format_milli(p.x_milli()) +
           ", y=" + format_milli(p.y_milli()) + ")";
  }
};

}  // namespace

std::string quote_string(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string serialize_action(const Action& a) {
  return std::visit(Serializer{}, a.payload());
}

std::string_view parse_error_kind_name(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax:
      return "syntax";
    case ParseErrorKind::UnknownAction:
      return "unknown_action";
    case ParseErrorKind::BadArguments:
      return "bad_arguments";
    case ParseErrorKind::CoordinateRange:
      return "coordinate_range";
  }
  return "syntax";
}

std::string ParseError::describe() const {
  return std::string(parse_error_kind_name(kind)) + " at byte " +
         std::to_string(offset) + ": " + message;
}

std::variant<ActionExpr, ParseError> parse_action_expr(std::string_view s) {
  return ExprParser(s).run();
}

ParseResult parse_action(std::string_view s, const ActionRegistry& registry) {
  auto parsed = parse_action_expr(s);
  if (auto* err = std::get_if<ParseError>(&parsed)) return *err;
  std::size_t name_offset = 0;
  while (name_offset < s.size() && is_ws(s[name_offset])) ++name_offset;
  return build_action(std::get<ActionExpr>(parsed), name_offset, registry);
}

std::string_view extract_action_expr(std::string_view text) {
  constexpr std::string_view kNextLabel = "Next action:";
  std::size_t i = 0;
  if (const auto label = text.rfind(kNextLabel); label != std::string_view::npos) {
    i = label + kNextLabel.size();
  }
  auto word_char = [](char c) {
    return is_ident_char(c) || is_digit(c) || (c >= 'A' && c <= 'Z');
  };
  while (i < text.size()) {
    if (!is_lower(text[i]) || (i > 0 && word_char(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_ident_char(text[j])) ++j;
    if (j >= text.size() || text[j] != '(') {
      i = j;
      continue;
    }
    int depth = 0;
    bool in_string = false;
    for (std::size_t k = j; k < text.size(); ++k) {
      const char c = text[k];
      if (in_string) {
        if (c == '\\') {
          ++k;
        } else if (c == '"') {
          in_string = false;
        }
      } else if (c == '"') {
        in_string = true;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')' && --depth == 0) {
        return text.substr(i, k + 1 - i);
      }
    }
    i = j;
  }
  return text;
}

}  // namespace guiprep
