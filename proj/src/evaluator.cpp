#include "guiprep/evaluator.h"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "guiprep/geometry.h"

namespace guiprep {

namespace {

constexpr std::array<std::string_view, 8> kErrorNames = {
    "syntax",  "unknown_action",     "bad_arguments", "coordinate_range",
    "timeout", "http_status", "malformed_response", "transport"};

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

bool payload_equal(const Action& gold, const Action& pred, const EvalConfig& cfg) {
  if (const auto* g = gold.get_if<act::Type>()) {
    const auto& p = *pred.get_if<act::Type>();
    return cfg.exact_text ? g->text == p.text
                          : normalize_text(g->text) == normalize_text(p.text);
  }
  if (const auto* g = gold.get_if<act::OpenApp>()) {
    const auto& p = *pred.get_if<act::OpenApp>();
    if (g->name.size() != p.name.size()) return false;
    for (std::size_t i = 0; i < g->name.size(); ++i)
      if (ascii_lower(g->name[i]) != ascii_lower(p.name[i])) return false;
    return true;
  }
  if (const auto* g = gold.get_if<act::Scroll>())
    return g->direction == pred.get_if<act::Scroll>()->direction;
  if (const auto* g = gold.get_if<act::Terminate>())
    return g->status == pred.get_if<act::Terminate>()->status;
  return true;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

Json tally_json(const KindTally& t) {
  Json j = Json::object();
  j["n"] = t.n;
  j["type_correct"] = t.type_ok;
  j["grounding_n"] = t.grounding_n;
  j["grounding_correct"] = t.grounding_ok;
  j["success"] = t.success;
  j["type_acc"] = t.n ? Json(static_cast<double>(t.type_ok) / t.n) : Json();
  j["grounding_acc"] =
      t.grounding_n ? Json(static_cast<double>(t.grounding_ok) / t.grounding_n) : Json();
  j["sr"] = t.n ? Json(static_cast<double>(t.success) / t.n) : Json();
  return j;
}

}  // namespace

std::string_view prediction_error_kind_name(PredictionErrorKind k) {
  return kErrorNames[static_cast<std::size_t>(k)];
}

std::optional<PredictionErrorKind> prediction_error_kind_from_name(std::string_view n) {
  for (std::size_t i = 0; i < kErrorNames.size(); ++i)
    if (kErrorNames[i] == n) return static_cast<PredictionErrorKind>(i);
  return std::nullopt;
}

bool is_parse_error(PredictionErrorKind k) {
  return k == PredictionErrorKind::Syntax || k == PredictionErrorKind::UnknownAction ||
         k == PredictionErrorKind::BadArguments ||
         k == PredictionErrorKind::CoordinateRange;
}

PredictionRecord classify_prediction(std::string sample_id, std::string raw_text,
                                     bool extract, const ActionRegistry& registry) {
  PredictionRecord rec{std::move(sample_id), std::move(raw_text), PredictionError{}};
  const std::string_view text =
      extract ? extract_action_expr(rec.raw_text) : std::string_view(rec.raw_text);
  auto r = parse_action(text, registry);
  if (auto* a = std::get_if<Action>(&r)) {
    rec.parsed = std::move(*a);
  } else {
    const auto& e = std::get<ParseError>(r);
    // ParseErrorKind values line up with the first four prediction kinds.
    rec.parsed = PredictionError{static_cast<PredictionErrorKind>(e.kind), e.describe()};
  }
  return rec;
}

std::string_view grounding_rule_name(GroundingRule r) {
  return r == GroundingRule::Box ? "box" : "distance";
}

std::optional<GroundingRule> grounding_rule_from_name(std::string_view n) {
  if (n == "box") return GroundingRule::Box;
  if (n == "distance") return GroundingRule::Distance;
  return std::nullopt;
}

std::string normalize_text(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += ascii_lower(c);
  }
  return out;
}

bool match_type(const Action& gold, const PredictionRecord* pred) {
  const Action* a = pred ? pred->action() : nullptr;
  return a && a->kind() == gold.kind();
}

std::optional<bool> match_grounding(const GoldStep& gold, const PredictionRecord* pred,
                                    const EvalConfig& cfg) {
  const auto gp = gold.gold_action.point();
  if (!gp) return std::nullopt;
  const Action* a = pred ? pred->action() : nullptr;
  const auto pp = a ? a->point() : std::nullopt;
  if (!pp) return false;
  if (cfg.rule == GroundingRule::Box && gold.gold_box)
    return point_in_box(*pp, *gold.gold_box, gold.screen);
  const double dx = pp->x_milli() - gp->x_milli();
  const double dy = pp->y_milli() - gp->y_milli();
  return std::hypot(dx, dy) / NormPoint::kScale <= cfg.distance_threshold;
}

StepVerdict match_step(const GoldStep& gold, const PredictionRecord* pred,
                       const EvalConfig& cfg) {
  StepVerdict v;
  v.type_ok = match_type(gold.gold_action, pred);
  v.grounding_ok = match_grounding(gold, pred, cfg);
  v.payload_ok = v.type_ok && payload_equal(gold.gold_action, *pred->action(), cfg);
  v.success = v.type_ok && v.grounding_ok.value_or(true) && v.payload_ok;
  return v;
}

KindTally& KindTally::operator+=(const KindTally& o) {
  n += o.n;
  type_ok += o.type_ok;
  grounding_n += o.grounding_n;
  grounding_ok += o.grounding_ok;
  success += o.success;
  return *this;
}

double EvalReport::type_acc() const {
  return total.n ? static_cast<double>(total.type_ok) / total.n : 0.0;
}

std::optional<double> EvalReport::grounding_acc() const {
  if (!total.grounding_n) return std::nullopt;
  return static_cast<double>(total.grounding_ok) / total.grounding_n;
}

double EvalReport::sr() const {
  return total.n ? static_cast<double>(total.success) / total.n : 0.0;
}

EvalReport evaluate(const std::vector<GoldStep>& gold,
                    const std::vector<PredictionRecord>& preds, const EvalConfig& cfg) {
  std::unordered_map<std::string_view, const PredictionRecord*> by_id;
  std::set<std::string_view> gold_ids;
  for (const auto& g : gold)
    if (!gold_ids.insert(g.sample_id).second)
      throw InputError("duplicate gold sample_id '" + g.sample_id + "'");
  for (const auto& p : preds) {
    if (!gold_ids.count(p.sample_id))
      throw InputError("prediction references unknown sample_id '" + p.sample_id + "'");
    if (!by_id.emplace(p.sample_id, &p).second)
      throw InputError("duplicate prediction for sample_id '" + p.sample_id + "'");
  }

  EvalReport r;
  r.config = cfg;
  for (const auto& g : gold) {
    const auto it = by_id.find(g.sample_id);
    const PredictionRecord* p = it == by_id.end() ? nullptr : it->second;
    if (!p) {
      ++r.missing;
    } else if (const auto* e = std::get_if<PredictionError>(&p->parsed)) {
      ++(is_parse_error(e->kind) ? r.unparseable : r.request_errors);
    }
    const StepVerdict v = match_step(g, p, cfg);
    KindTally t;
    t.n = 1;
    t.type_ok = v.type_ok;
    t.grounding_n = v.grounding_ok.has_value();
    t.grounding_ok = v.grounding_ok.value_or(false);
    t.success = v.success;
    r.total += t;
    r.by_kind[static_cast<std::size_t>(g.gold_action.kind())] += t;
  }
  return r;
}

Json config_json(const EvalConfig& cfg) {
  Json j = Json::object();
  j["grounding_rule"] = grounding_rule_name(cfg.rule);
  j["distance_threshold"] = cfg.distance_threshold;
  j["exact_text"] = cfg.exact_text;
  return j;
}

Json report_json(const EvalReport& r) {
  Json j = Json::object();
  j["n_steps"] = r.n_steps();
  j["type_acc"] = r.type_acc();
  j["grounding_acc"] = r.grounding_acc() ? Json(*r.grounding_acc()) : Json();
  j["sr"] = r.sr();
  j["grounding_steps"] = r.total.grounding_n;
  j["unparseable"] = r.unparseable;
  j["request_errors"] = r.request_errors;
  j["missing"] = r.missing;
  Json kinds = Json::object();
  for (std::size_t k = 0; k < kActionKindCount; ++k) {
    if (r.by_kind[k].n)
      kinds[std::string(kind_name(static_cast<ActionKind>(k)))] = tally_json(r.by_kind[k]);
  }
  j["by_kind"] = std::move(kinds);
  j["config"] = config_json(r.config);
  return j;
}

std::string report_summary(const EvalReport& r) {
  const auto g = r.grounding_acc();
  return "steps=" + std::to_string(r.n_steps()) + " type=" + fixed3(r.type_acc()) +
         " grounding=" + (g ? fixed3(*g) : std::string("n/a")) + " sr=" + fixed3(r.sr()) +
         " unparseable=" + std::to_string(r.unparseable) +
         " request_errors=" + std::to_string(r.request_errors) +
         " missing=" + std::to_string(r.missing) +
         " rule=" + std::string(grounding_rule_name(r.config.rule)) +
         " threshold=" + fixed3(r.config.distance_threshold);
}

GoldStep gold_from_sample(const PlanningSample& s) {
  return {s.sample_id, s.target_forward, std::nullopt, s.screen};
}

std::string to_jsonl(const GoldStep& g) {
  JsonLine line;
  line.field("sample_id", g.sample_id).field("gold_action", serialize_action(g.gold_action));
  if (g.gold_box)
    line.raw("gold_box", box_json(*g.gold_box));
  else
    line.null("gold_box");
  return line.raw("screen", screen_json(g.screen)).str();
}

GoldStep gold_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("gold step is not an object");
  GoldStep g{require_string(j, "sample_id"), action_from_json(j, "gold_action"),
             std::nullopt, screen_from_json(j, "screen")};
  const auto it = j.find("gold_box");
  if (it != j.end() && !it->is_null()) {
    g.gold_box = box_from_json(j, "gold_box");
    if (!g.gold_box->within(g.screen))
      throw FormatError("gold_box: box lies outside the screen");
  }
  return g;
}

std::vector<GoldStep> read_gold_jsonl(const std::filesystem::path& p) {
  std::vector<GoldStep> out;
  const auto lines = read_lines(p);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(gold_from_json(Json::parse(lines[i])));
    } catch (const std::exception& e) {
      throw InputError(p.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

std::string to_jsonl(const PredictionRecord& p) {
  JsonLine line;
  line.field("sample_id", p.sample_id).field("raw_text", p.raw_text);
  const auto* e = std::get_if<PredictionError>(&p.parsed);
  if (e && !is_parse_error(e->kind)) {
    line.raw("error", JsonLine()
                          .field("kind", prediction_error_kind_name(e->kind))
                          .field("message", e->message)
                          .str());
  } else {
    line.null("error");
  }
  return line.str();
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& p,
                                               bool extract) {
  std::vector<PredictionRecord> out;
  std::set<std::string> seen;
  const auto lines = read_lines(p);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = p.string() + ":" + std::to_string(i + 1) + ": ";
    Json j;
    try {
      j = Json::parse(lines[i]);
      if (!j.is_object()) throw FormatError("prediction is not an object");
      std::string id = require_string(j, "sample_id");
      std::string raw = require_string(j, "raw_text");
      if (!seen.insert(id).second)
        throw InputError("duplicate sample_id '" + id + "'");
      const auto err = j.find("error");
      if (err != j.end() && !err->is_null()) {
        const auto kind = prediction_error_kind_from_name(require_string(*err, "kind"));
        if (!kind) throw FormatError("error.kind: unknown error kind");
        out.push_back({std::move(id), std::move(raw),
                       PredictionError{*kind, optional_string(*err, "message").value_or("")}});
      } else {
        out.push_back(classify_prediction(std::move(id), std::move(raw), extract));
      }
    } catch (const std::exception& e) {
      throw InputError(where + e.what());
    }
  }
  return out;
}

}  // namespace guiprep
