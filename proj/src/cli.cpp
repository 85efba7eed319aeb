#include "guiprep/cli.h"

#include <cmath>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "guiprep/conversation.h"
#include "guiprep/corpus_stats.h"
#include "guiprep/evaluator.h"
#include "guiprep/ingest.h"
#include "guiprep/model_client.h"
#include "guiprep/planning.h"
#include "guiprep/synth.h"

namespace guiprep {

namespace fs = std::filesystem;

namespace {

// Links a flag to its config-file key.
struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<void(const Json&)> apply;
  std::function<Json()> value;
};

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& help, RunConfig& cfg)
      : app_(parent.add_subcommand(name, help)) {
    app_->add_option("--config", config_path_, "JSON file with default option values");
    bind("--out", "out", cfg.out, "Output directory");
  }

  template <typename T>
  CLI::Option* bind(const std::string& flag, const std::string& key, T& var,
                    const std::string& help) {
    CLI::Option* o = app_->add_option(flag, var, help);
    add(key, o, var);
    return o;
  }

  CLI::Option* flag(const std::string& flag, const std::string& key, bool& var,
                    const std::string& help) {
    CLI::Option* o = app_->add_flag(flag, var, help);
    add(key, o, var);
    return o;
  }

  CLI::App* app() const { return app_; }

  // Config-file values fill options not given on the command line.
  void merge_config(const std::set<std::string>& known_keys) {
    if (config_path_.empty()) return;
    Json doc;
    try {
      doc = Json::parse(read_text(config_path_));
    } catch (const std::exception& e) {
      throw ConfigError("config file " + config_path_ + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config file " + config_path_ + ": not an object");
    for (const auto& [key, value] : doc.items()) {
      if (!known_keys.count(key))
        throw ConfigError("config file " + config_path_ + ": unknown key '" + key + "'");
      for (auto& b : bindings_) {
        if (b.key != key || b.option->count()) continue;
        try {
          b.apply(value);
        } catch (const Json::exception&) {
          throw ConfigError("config file " + config_path_ + ": wrong type for '" + key + "'");
        }
      }
    }
  }

  Json effective() const {
    Json j = Json::object();
    for (const auto& b : bindings_) j[b.key] = b.value();
    return j;
  }

  const std::vector<Binding>& bindings() const { return bindings_; }

 private:
  template <typename T>
  void add(const std::string& key, CLI::Option* o, T& var) {
    bindings_.push_back({key, o, [&var](const Json& j) { var = j.get<T>(); },
                         [&var] { return Json(var); }});
  }

  CLI::App* app_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

fs::path out_dir(const RunConfig& cfg) { return cfg.out; }

fs::path or_default(const std::string& given, const RunConfig& cfg, const char* name) {
  return given.empty() ? out_dir(cfg) / name : fs::path(given);
}

void write_sidecar(const RunConfig& cfg, const Json& effective) {
  Json j = effective;
  j["command"] = cfg.command;
  write_text(out_dir(cfg) / (cfg.command + ".config.json"), j.dump(2) + "\n");
}

template <typename T>
std::vector<std::string> jsonl(const std::vector<T>& items) {
  std::vector<std::string> lines;
  lines.reserve(items.size());
  for (const auto& i : items) lines.push_back(to_jsonl(i));
  return lines;
}

std::string line_list(const std::vector<Rejection>& rs) {
  std::string s;
  for (const auto& r : rs) s += (s.empty() ? "" : ",") + std::to_string(r.line);
  return s;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  if (cfg.manifest.empty()) throw ConfigError("ingest needs --manifest");
  if (cfg.workers < 1) throw ConfigError("--workers must be >= 1");
  const auto manifests = load_manifest(cfg.manifest);
  std::vector<GroundingRecord> grounding;
  std::vector<Trajectory> trajectories;
  std::vector<Rejection> rejections;
  const IngestOptions opts{cfg.workers};
  for (const auto& m : manifests) {
    std::size_t lines = 0, kept = 0;
    std::vector<Rejection> rej;
    if (m.kind == SourceKind::Grounding) {
      auto r = ingest_grounding(m, opts);
      lines = r.source_lines;
      kept = r.records.size();
      rej = std::move(r.rejections);
      grounding.insert(grounding.end(), std::make_move_iterator(r.records.begin()),
                       std::make_move_iterator(r.records.end()));
    } else {
      auto r = ingest_trajectories(m, opts);
      lines = r.source_lines;
      kept = r.records.size();
      rej = std::move(r.rejections);
      trajectories.insert(trajectories.end(), std::make_move_iterator(r.records.begin()),
                          std::make_move_iterator(r.records.end()));
    }
    out << m.source_tag << " [" << source_kind_name(m.kind) << "] lines=" << lines
        << " records=" << kept << " rejected=" << rej.size();
    if (!rej.empty()) out << " (lines " << line_list(rej) << ")";
    out << "\n";
    rejections.insert(rejections.end(), rej.begin(), rej.end());
  }
  write_lines(out_dir(cfg) / "grounding.jsonl", jsonl(grounding));
  write_lines(out_dir(cfg) / "trajectories.jsonl", jsonl(trajectories));
  write_lines(out_dir(cfg) / "rejections.jsonl", jsonl(rejections));
  out << "total grounding=" << grounding.size() << " trajectories=" << trajectories.size()
      << " rejected=" << rejections.size() << "\n";
  return kExitOk;
}

int cmd_pack(const RunConfig& cfg, std::ostream& out) {
  if (cfg.max_turns < 1) throw ConfigError("--max-turns must be >= 1");
  const fs::path tmpl_path = cfg.prompt_template.empty()
                                 ? asset_dir() / "templates/grounding_prompt_v1.txt"
                                 : fs::path(cfg.prompt_template);
  const auto tmpl = PromptTemplate::load(tmpl_path);
  const auto records = read_grounding_jsonl(or_default(cfg.input, cfg, "grounding.jsonl"));
  const auto packed = build_conversations(records, cfg.max_turns, tmpl);
  write_lines(out_dir(cfg) / "conversations.jsonl", jsonl(packed.conversations));
  write_lines(out_dir(cfg) / "pack_rejections.jsonl", jsonl(packed.rejections));
  std::size_t turns = 0;
  for (const auto& c : packed.conversations) turns += c.turns.size();
  out << "records=" << records.size() << " conversations=" << packed.conversations.size()
      << " turns=" << turns << " rejected_groups=" << packed.rejections.size()
      << " template=" << tmpl.version() << "\n";
  return kExitOk;
}

int cmd_transform(const RunConfig& cfg, std::ostream& out) {
  const auto mode = history_mode_from_name(cfg.mode);
  if (!mode) throw ConfigError("--mode must be instruction or action, got '" + cfg.mode + "'");
  const auto tmpl = PlanningTemplates::load(asset_dir() / "templates");
  const auto trajs =
      read_trajectories_jsonl(or_default(cfg.input, cfg, "trajectories.jsonl"));
  const auto r = transform_corpus(trajs, {*mode, cfg.hybrid}, tmpl);
  std::vector<GoldStep> gold;
  std::size_t backs = 0;
  for (const auto& s : r.samples) {
    gold.push_back(gold_from_sample(s));
    backs += s.target_back.has_value();
  }
  write_lines(out_dir(cfg) / "samples.jsonl", jsonl(r.samples));
  write_lines(out_dir(cfg) / "gold.jsonl", jsonl(gold));
  write_lines(out_dir(cfg) / "transform_skipped.jsonl", jsonl(r.skipped));
  out << "trajectories=" << trajs.size() << " samples=" << r.samples.size()
      << " back_targets=" << backs << " skipped=" << r.skipped.size()
      << " mode=" << cfg.mode << " hybrid=" << (cfg.hybrid ? "true" : "false") << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const Json& effective, std::ostream& out) {
  const auto rule = grounding_rule_from_name(cfg.grounding_rule);
  if (!rule)
    throw ConfigError("--grounding-rule must be box or distance, got '" + cfg.grounding_rule +
                      "'");
  if (!(cfg.distance_threshold >= 0) || !std::isfinite(cfg.distance_threshold))
    throw ConfigError("--distance-threshold must be a non-negative number");
  if (cfg.preds.empty()) throw ConfigError("eval needs --preds");
  const auto gold = read_gold_jsonl(or_default(cfg.gold, cfg, "gold.jsonl"));
  const auto preds = read_predictions(cfg.preds, cfg.extract);
  const EvalConfig ec{*rule, cfg.distance_threshold, cfg.exact_text};
  const auto report = evaluate(gold, preds, ec);
  Json j = report_json(report);
  j["run_config"] = effective;
  write_text(out_dir(cfg) / "report.json", j.dump(2) + "\n");
  out << report_summary(report) << "\n";
  return kExitOk;
}

int cmd_stats(const RunConfig& cfg, std::ostream& out) {
  const fs::path gp = or_default(cfg.grounding, cfg, "grounding.jsonl");
  const fs::path tp = or_default(cfg.trajectories, cfg, "trajectories.jsonl");
  // Defaults under --out are optional; explicit paths must exist.
  const bool use_g = !cfg.grounding.empty() || fs::exists(gp);
  const bool use_t = !cfg.trajectories.empty() || fs::exists(tp);
  if (!use_g && !use_t) throw InputError("no grounding or trajectory corpus found");
  const auto report = compute_stats(use_g ? read_grounding_jsonl(gp) : std::vector<GroundingRecord>{},
                                    use_t ? read_trajectories_jsonl(tp) : std::vector<Trajectory>{});
  const std::string table = stats_table(report);
  write_text(out_dir(cfg) / "stats.json", stats_json(report) + "\n");
  write_text(out_dir(cfg) / "stats.txt", table);
  out << table;
  return kExitOk;
}

int cmd_infer(const RunConfig& cfg, std::ostream& out) {
  EndpointConfig ec;
  ec.base_url = cfg.endpoint;
  ec.timeout_seconds = cfg.timeout;
  ec.max_retries = cfg.max_retries;
  ec.max_in_flight = cfg.max_in_flight;
  ec.auth_token = auth_token_from_env();
  if (ec.base_url.empty()) throw ConfigError("infer needs --endpoint");
  try {
    ec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<PlanningSample> samples;
  const fs::path in = or_default(cfg.input, cfg, "samples.jsonl");
  const auto lines = read_lines(in);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      samples.push_back(planning_sample_from_json(Json::parse(lines[i])));
    } catch (const std::exception& e) {
      throw InputError(in.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
  const auto preds = batch_infer(ec, samples, cfg.extract);
  std::size_t failed = 0, unparsed = 0;
  for (const auto& p : preds) {
    if (const auto* e = std::get_if<PredictionError>(&p.parsed))
      ++(is_parse_error(e->kind) ? unparsed : failed);
  }
  write_lines(out_dir(cfg) / "predictions.jsonl", jsonl(preds));
  out << "samples=" << samples.size() << " predictions=" << preds.size()
      << " request_errors=" << failed << " unparseable=" << unparsed << "\n";
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  if (cfg.records < 0 || cfg.traces < 0 || cfg.screenshots < 1)
    throw ConfigError("--records and --traces must be >= 0, --screenshots >= 1");
  const auto g = synth_grounding(cfg.seed, cfg.records, cfg.screenshots);
  const auto t = synth_trajectories(cfg.seed, cfg.traces);
  write_lines(out_dir(cfg) / "grounding.jsonl", jsonl(g));
  write_lines(out_dir(cfg) / "trajectories.jsonl", jsonl(t));
  out << "seed=" << cfg.seed << " grounding=" << g.size() << " trajectories=" << t.size()
      << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"GUI agent data preparation and evaluation toolkit", "guiprep"};
  app.require_subcommand(1);

  std::vector<std::unique_ptr<Command>> cmds;
  auto make = [&](const std::string& name, const std::string& help) -> Command& {
    cmds.push_back(std::make_unique<Command>(app, name, help, cfg));
    return *cmds.back();
  };

  auto& ingest = make("ingest", "Normalize sources listed in a manifest into canonical JSONL");
  ingest.bind("--manifest", "manifest", cfg.manifest, "Source manifest (JSON)");
  ingest.bind("--workers", "workers", cfg.workers, "Parallel shards per source");

  auto& pack = make("pack", "Pack grounding records into multi-turn conversations");
  pack.bind("--input", "input", cfg.input, "Canonical grounding JSONL (default OUT/grounding.jsonl)");
  pack.bind("--max-turns", "max_turns", cfg.max_turns, "Turns per conversation");
  pack.bind("--template", "template", cfg.prompt_template, "Grounding prompt template file");

  auto& transform = make("transform", "Turn trajectories into planning samples");
  transform.bind("--input", "input", cfg.input,
                 "Canonical trajectory JSONL (default OUT/trajectories.jsonl)");
  transform.bind("--mode", "mode", cfg.mode, "History rendering: instruction or action");
  transform.flag("--hybrid", "hybrid", cfg.hybrid, "Also predict the previous action");

  auto& eval = make("eval", "Score predictions against gold steps");
  eval.bind("--gold", "gold", cfg.gold, "Gold JSONL (default OUT/gold.jsonl)");
  eval.bind("--preds", "preds", cfg.preds, "Predictions JSONL {sample_id, raw_text}");
  eval.bind("--grounding-rule", "grounding_rule", cfg.grounding_rule, "box or distance");
  eval.bind("--distance-threshold", "distance_threshold", cfg.distance_threshold,
            "Normalized distance for the distance rule");
  eval.flag("--extract", "extract", cfg.extract, "Pull the action out of free-form text");
  eval.flag("--exact-text", "exact_text", cfg.exact_text, "Compare typed text verbatim");

  auto& stats = make("stats", "Corpus statistics per source");
  stats.bind("--grounding", "grounding", cfg.grounding, "Canonical grounding JSONL");
  stats.bind("--trajectories", "trajectories", cfg.trajectories, "Canonical trajectory JSONL");

  auto& infer = make("infer", "Request predictions for planning samples from an endpoint");
  infer.bind("--input", "input", cfg.input, "Planning samples (default OUT/samples.jsonl)");
  infer.bind("--endpoint", "endpoint", cfg.endpoint, "Base URL; requests POST to URL/predict");
  infer.bind("--timeout", "timeout", cfg.timeout, "Per-request timeout in seconds");
  infer.bind("--max-retries", "max_retries", cfg.max_retries, "Retries on transient failures");
  infer.bind("--max-in-flight", "max_in_flight", cfg.max_in_flight, "Concurrent requests");
  infer.flag("--extract", "extract", cfg.extract, "Pull the action out of free-form text");

  auto& synth = make("synth", "Write seeded synthetic corpora");
  synth.bind("--seed", "seed", cfg.seed, "Random seed");
  synth.bind("--records", "records", cfg.records, "Grounding records");
  synth.bind("--screenshots", "screenshots", cfg.screenshots, "Distinct screenshots");
  synth.bind("--traces", "traces", cfg.traces, "Trajectories");

  std::set<std::string> known_keys;
  for (const auto& c : cmds)
    for (const auto& b : c->bindings()) known_keys.insert(b.key);

  std::vector<const char*> argv = {"guiprep"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Command* active = nullptr;
  for (const auto& c : cmds)
    if (c->app()->parsed()) active = c.get();
  cfg.command = active->app()->get_name();

  try {
    active->merge_config(known_keys);
    if (cfg.out.empty()) throw ConfigError("--out is required");
    const Json effective = active->effective();
    int code = kExitOk;
    if (cfg.command == "ingest") code = cmd_ingest(cfg, out);
    else if (cfg.command == "pack") code = cmd_pack(cfg, out);
    else if (cfg.command == "transform") code = cmd_transform(cfg, out);
    else if (cfg.command == "eval") code = cmd_eval(cfg, effective, out);
    else if (cfg.command == "stats") code = cmd_stats(cfg, out);
    else if (cfg.command == "infer") code = cmd_infer(cfg, out);
    else if (cfg.command == "synth") code = cmd_synth(cfg, out);
    write_sidecar(cfg, effective);
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace guiprep
