#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "guiprep/action.h"

namespace guiprep {

// Canonical text form, e.g. `click(x=0.500, y=0.500)`.
std::string serialize_action(const Action& a);

// Double-quoted with \" and \\ escapes; every other byte is copied.
std::string quote_string(std::string_view s);

enum class ParseErrorKind {
  Syntax,           // lexing or structure; offset is meaningful
  UnknownAction,    // name is not registered
  BadArguments,     // missing, extra, or ill-typed kwarg for the kind
  CoordinateRange,  // x or y outside [0, 1]
};

std::string_view parse_error_kind_name(ParseErrorKind k);

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::Syntax;
  std::size_t offset = 0;  // byte offset into the untrimmed input
  std::string message;

  std::string describe() const;
  friend bool operator==(const ParseError&, const ParseError&) = default;
};

using ParseResult = std::variant<Action, ParseError>;

// Numeric literal in ten-thousandths, exact for up to four decimals.
struct ExprNumber {
  long long value_e4 = 0;
  friend bool operator==(const ExprNumber&, const ExprNumber&) = default;
};

// Intermediate form: a name plus ordered keyword arguments.
struct ActionExpr {
  using Number = ExprNumber;
  struct Kwarg {
    std::string key;
    std::variant<Number, std::string> value;
    std::size_t offset = 0;
  };

  std::string name;
  std::vector<Kwarg> kwargs;
};

// Grammar-level parse of exactly one expression (surrounding whitespace
// allowed). Never throws.
std::variant<ActionExpr, ParseError> parse_action_expr(std::string_view s);

// Full parse: grammar, name lookup, payload validation. Never throws.
ParseResult parse_action(std::string_view s,
                         const ActionRegistry& registry =
                             ActionRegistry::canonical());

// Lossy pre-pass for free-form model output: returns the first
// `name(...)` substring with balanced parentheses (quotes respected). When
// the text contains a "Next action:" label the search starts after the
// last such label. Returns the input unchanged when nothing matches.
std::string_view extract_action_expr(std::string_view text);

}  // namespace guiprep
