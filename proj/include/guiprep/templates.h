#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "guiprep/action.h"

namespace guiprep {

// Directory holding the shipped text assets. GUIPREP_ASSET_DIR in the
// environment overrides the build-time location.
std::filesystem::path asset_dir();

// Text template with {name} placeholders, loaded from a versioned asset.
// Leading lines starting with '#' are header comments; the first one names
// the version ("# grounding_prompt/v1").
class PromptTemplate {
 public:
  PromptTemplate(std::string body, std::string version);

  static PromptTemplate load(const std::filesystem::path& path);

  // Single pass: substituted values are never re-expanded. Unknown
  // placeholders are left as written.
  std::string render(const std::map<std::string, std::string, std::less<>>& vars) const;

  const std::string& body() const { return body_; }
  const std::string& version() const { return version_; }

 private:
  std::string body_;
  std::string version_;
};

// Natural-language rendering of actions for steps that carry no low-level
// instruction, plus the objective sentences used by planning prompts.
class InstructionTemplates {
 public:
  static InstructionTemplates load(const std::filesystem::path& path);

  std::string render(const Action& a) const;
  const std::string& forward_objective() const { return forward_objective_; }
  const std::string& hybrid_objective() const { return hybrid_objective_; }
  const std::string& version() const { return version_; }

 private:
  std::vector<PromptTemplate> per_kind_;  // indexed by ActionKind
  std::string forward_objective_;
  std::string hybrid_objective_;
  std::string version_;

  InstructionTemplates() = default;
};

}  // namespace guiprep
