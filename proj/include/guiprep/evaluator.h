#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "guiprep/action_grammar.h"
#include "guiprep/canonical.h"
#include "guiprep/planning.h"

namespace guiprep {

struct GoldStep {
  std::string sample_id;
  Action gold_action;
  std::optional<BBox> gold_box;
  ScreenSize screen;
};

// Parse failures keep the grammar's classes; the rest come from the model
// client. Every kind scores as a failed step.
enum class PredictionErrorKind {
  Syntax,
  UnknownAction,
  BadArguments,
  CoordinateRange,
  Timeout,
  HttpStatus,
  MalformedResponse,
  Transport,
};

std::string_view prediction_error_kind_name(PredictionErrorKind k);
std::optional<PredictionErrorKind> prediction_error_kind_from_name(std::string_view n);
bool is_parse_error(PredictionErrorKind k);

struct PredictionError {
  PredictionErrorKind kind = PredictionErrorKind::Syntax;
  std::string message;
};

struct PredictionRecord {
  std::string sample_id;
  std::string raw_text;
  std::variant<Action, PredictionError> parsed;

  const Action* action() const { return std::get_if<Action>(&parsed); }
};

// Runs the grammar over raw_text, optionally after the extraction pre-pass.
PredictionRecord classify_prediction(std::string sample_id, std::string raw_text,
                                     bool extract,
                                     const ActionRegistry& registry =
                                         ActionRegistry::canonical());

enum class GroundingRule {
  Box,       // inside gold_box when present, else distance fallback
  Distance,  // distance always
};

std::string_view grounding_rule_name(GroundingRule r);
std::optional<GroundingRule> grounding_rule_from_name(std::string_view n);

inline constexpr double kDefaultDistanceThreshold = 0.14;

struct EvalConfig {
  GroundingRule rule = GroundingRule::Box;
  double distance_threshold = kDefaultDistanceThreshold;
  bool exact_text = false;
};

// Trim, ASCII case-fold, collapse whitespace runs to one space.
std::string normalize_text(std::string_view s);

bool match_type(const Action& gold, const PredictionRecord* pred);

// nullopt when the gold action carries no coordinate.
std::optional<bool> match_grounding(const GoldStep& gold, const PredictionRecord* pred,
                                    const EvalConfig& cfg = {});

struct StepVerdict {
  bool type_ok = false;
  std::optional<bool> grounding_ok;
  bool payload_ok = false;
  bool success = false;
};

// pred may be null (missing prediction).
StepVerdict match_step(const GoldStep& gold, const PredictionRecord* pred,
                       const EvalConfig& cfg = {});

struct KindTally {
  std::size_t n = 0;
  std::size_t type_ok = 0;
  std::size_t grounding_n = 0;
  std::size_t grounding_ok = 0;
  std::size_t success = 0;

  KindTally& operator+=(const KindTally& o);
};

struct EvalReport {
  KindTally total;
  std::array<KindTally, kActionKindCount> by_kind{};  // indexed by gold kind
  std::size_t unparseable = 0;
  std::size_t request_errors = 0;
  std::size_t missing = 0;
  EvalConfig config;

  std::size_t n_steps() const { return total.n; }
  double type_acc() const;
  std::optional<double> grounding_acc() const;  // nullopt with no coordinate steps
  double sr() const;
};

// Throws InputError on a duplicate gold id, a duplicate prediction id, or a
// prediction whose id is not in gold.
EvalReport evaluate(const std::vector<GoldStep>& gold,
                    const std::vector<PredictionRecord>& preds,
                    const EvalConfig& cfg = {});

Json config_json(const EvalConfig& cfg);
Json report_json(const EvalReport& r);
std::string report_summary(const EvalReport& r);

GoldStep gold_from_sample(const PlanningSample& s);
std::string to_jsonl(const GoldStep& g);
GoldStep gold_from_json(const Json& j);
std::vector<GoldStep> read_gold_jsonl(const std::filesystem::path& p);

// {sample_id, raw_text} lines; the error kind is kept for client failures.
std::string to_jsonl(const PredictionRecord& p);

// Throws InputError naming the id on a duplicate sample_id.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& p,
                                               bool extract);

}  // namespace guiprep
