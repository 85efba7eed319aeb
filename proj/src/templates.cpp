#include "guiprep/templates.h"

#include <cstdlib>

#include "guiprep/action_grammar.h"
#include "guiprep/canonical.h"

namespace guiprep {
namespace {

bool is_placeholder_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

std::filesystem::path asset_dir() {
  if (const char* env = std::getenv("GUIPREP_ASSET_DIR"); env && *env) {
    return env;
  }
  return GUIPREP_ASSET_DIR;
}

PromptTemplate::PromptTemplate(std::string body, std::string version)
    : body_(std::move(body)), version_(std::move(version)) {}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::size_t i = 0;
  std::string version;
  while (i < lines.size() && !lines[i].empty() && lines[i][0] == '#') {
    if (i == 0) version = trim(std::string_view(lines[i]).substr(1));
    ++i;
  }
  std::string body;
  for (const std::size_t first = i; i < lines.size(); ++i) {
    if (i > first) body.push_back('\n');
    body += lines[i];
  }
  if (body.empty()) throw InputError("template '" + path.string() + "' is empty");
  return PromptTemplate(std::move(body), std::move(version));
}

std::string PromptTemplate::render(
    const std::map<std::string, std::string, std::less<>>& vars) const {
  std::string out;
  out.reserve(body_.size() + 64);
  std::size_t i = 0;
  while (i < body_.size()) {
    if (body_[i] == '{') {
      std::size_t j = i + 1;
      while (j < body_.size() && is_placeholder_char(body_[j])) ++j;
      if (j < body_.size() && body_[j] == '}' && j > i + 1) {
        const std::string_view name(body_.data() + i + 1, j - i - 1);
        if (auto it = vars.find(name); it != vars.end()) {
          out += it->second;
          i = j + 1;
          continue;
        }
      }
    }
    out.push_back(body_[i++]);
  }
  return out;
}

InstructionTemplates InstructionTemplates::load(const std::filesystem::path& path) {
  const Json doc = Json::parse(read_text(path), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw InputError("instruction templates '" + path.string() +
                     "' are not a JSON object");
  }
  InstructionTemplates t;
  try {
    t.version_ = require_string(doc, "version");
    const Json& per_kind = require_member(doc, "templates");
    for (std::size_t i = 0; i < kActionKindCount; ++i) {
      const auto name = kind_name(static_cast<ActionKind>(i));
      t.per_kind_.emplace_back(require_string(per_kind, name), t.version_);
    }
    const Json& objectives = require_member(doc, "objectives");
    t.forward_objective_ = require_string(objectives, "forward");
    t.hybrid_objective_ = require_string(objectives, "hybrid");
  } catch (const FormatError& e) {
    throw InputError("instruction templates '" + path.string() + "': " + e.what());
  }
  return t;
}

std::string InstructionTemplates::render(const Action& a) const {
  std::map<std::string, std::string, std::less<>> vars;
  if (auto p = a.point()) {
    vars["x"] = format_milli(p->x_milli());
    vars["y"] = format_milli(p->y_milli());
  }
  if (const auto* t = a.get_if<act::Type>()) vars["text"] = t->text;
  if (const auto* s = a.get_if<act::Scroll>()) {
    vars["direction"] = std::string(direction_name(s->direction));
  }
  if (const auto* o = a.get_if<act::OpenApp>()) vars["name"] = o->name;
  if (const auto* t = a.get_if<act::Terminate>()) {
    vars["status"] = std::string(status_name(t->status));
  }
  return per_kind_[static_cast<std::size_t>(a.kind())].render(vars);
}

}  // namespace guiprep
