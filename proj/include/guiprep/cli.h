#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guiprep/canonical.h"

namespace guiprep {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitConfig = 2;

// Bad flag values, unreadable or malformed --config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Effective settings after merging flags over the --config file over
// defaults. Paths are kept as given. Each run writes the keys its
// subcommand accepts to OUT/<command>.config.json.
struct RunConfig {
  std::string command;
  std::string out;
  std::string manifest;
  unsigned workers = 1;
  std::string input;
  int max_turns = 20;
  std::string prompt_template;
  std::string mode = "action";
  bool hybrid = false;
  std::string gold;
  std::string preds;
  std::string grounding_rule = "box";
  double distance_threshold = 0.14;
  bool extract = false;
  bool exact_text = false;
  std::string grounding;
  std::string trajectories;
  std::string endpoint;
  double timeout = 30.0;
  int max_retries = 2;
  int max_in_flight = 4;
  std::uint64_t seed = 0;
  int records = 1000;
  int screenshots = 100;
  int traces = 50;
};

// Entry point for the guiprep binary. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace guiprep
