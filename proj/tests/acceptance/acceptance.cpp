// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "guiprep/action_grammar.h"
#include "guiprep/conversation.h"
#include "guiprep/corpus_stats.h"
#include "guiprep/evaluator.h"
#include "guiprep/geometry.h"
#include "guiprep/model_client.h"
#include "guiprep/planning.h"
#include "guiprep/synth.h"
#include "support/eval_oracle.h"
#include "support/generators.h"
#include "support/pipeline.h"
#include "support/stub_server.h"
#include "support/temp_dir.h"

using namespace guiprep;
namespace fs = std::filesystem;

namespace {

// Thrown by expect() with the failing detail.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0 = no limit
  std::function<std::string()> body;
};

std::string crit1() {
  std::mt19937 rng(1001);
  std::uniform_int_distribution<int> dim(1, 4096);
  int worst_x = 0, worst_y = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const ScreenSize s(dim(rng), dim(rng));
    const PixelPoint p{std::uniform_int_distribution<int>(0, s.width() - 1)(rng),
                       std::uniform_int_distribution<int>(0, s.height() - 1)(rng)};
    const PixelPoint back = denormalize(normalize_point(p, s), s);
    const int dx = std::abs(back.x - p.x), dy = std::abs(back.y - p.y);
    const int bx = (s.width() + 999) / 1000, by = (s.height() + 999) / 1000;
    expect(dx <= bx && dy <= by,
           "round-trip deviation too large at screen " + std::to_string(s.width()) + "x" +
               std::to_string(s.height()));
    worst_x = std::max(worst_x, dx);
    worst_y = std::max(worst_y, dy);
    for (int k : {2, 3, 7}) {
      const ScreenSize ks(s.width() * k, s.height() * k);
      expect(normalize_point({p.x * k, p.y * k}, ks) == normalize_point(p, s),
             "scale invariance broken for k=" + std::to_string(k));
    }
  }
  return std::to_string(n) + " pairs, worst deviation " + std::to_string(worst_x) + "/" +
         std::to_string(worst_y) + " px, k in {2,3,7} exact";
}

std::string crit2() {
  std::mt19937 rng(2002);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const Action a = testing::random_action(rng);
    const std::string text = serialize_action(a);
    const auto r = parse_action(text);
    const auto* back = std::get_if<Action>(&r);
    expect(back && *back == a, "round-trip failed for " + text);
  }
  const int fuzz = 100000;
  int accepted = 0;
  std::array<int, 4> by_kind{};
  std::uniform_int_distribution<int> len(0, 64), byte(0, 255), coin(0, 3);
  const std::string seeds[] = {"click(x=0.5, y=0.5)", "type(text=\"a\")",
                               "scroll(direction=\"up\")", "terminate(status=\"success\")"};
  for (int i = 0; i < fuzz; ++i) {
    std::string s;
    if (coin(rng) == 0) {
      // Mutate a valid expression so the parser gets past the first byte.
      s = seeds[coin(rng)];
      for (int m = std::uniform_int_distribution<int>(1, 4)(rng); m > 0; --m)
        s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)] =
            static_cast<char>(byte(rng));
    } else {
      for (int k = len(rng); k > 0; --k) s.push_back(static_cast<char>(byte(rng)));
    }
    const auto r = parse_action(s);
    if (std::holds_alternative<Action>(r)) {
      ++accepted;
    } else {
      const auto kind = static_cast<int>(std::get<ParseError>(r).kind);
      expect(kind >= 0 && kind < 4, "unclassified parse error");
      ++by_kind[kind];
    }
  }
  std::ostringstream os;
  os << n << " round-trips; " << fuzz << " fuzz inputs: " << accepted << " parsed, "
     << by_kind[0] << " syntax, " << by_kind[1] << " unknown_action, " << by_kind[2]
     << " bad_arguments, " << by_kind[3] << " coordinate_range";
  return os.str();
}

std::string dump(const PackResult& p) {
  std::string out;
  for (const auto& c : p.conversations) out += to_jsonl(c) + "\n";
  for (const auto& r : p.rejections) out += to_jsonl(r) + "\n";
  return out;
}

std::string crit3() {
  const auto tmpl = PromptTemplate::load(asset_dir() / "templates/grounding_prompt_v1.txt");
  auto records = synth_grounding(3003, 50000, 5000);
  const auto base = build_conversations(records, kDefaultMaxTurns, tmpl);
  std::size_t turns = 0;
  for (const auto& c : base.conversations) turns += c.turns.size();
  expect(base.rejections.empty(), "unexpected group rejections");
  expect(turns == records.size(), "turns != records");
  std::mt19937 rng(3003);
  std::shuffle(records.begin(), records.end(), rng);
  expect(dump(build_conversations(records, kDefaultMaxTurns, tmpl)) == dump(base),
         "output differs after shuffling");
  return std::to_string(records.size()) + " records, 5000 screenshots -> " +
         std::to_string(base.conversations.size()) + " conversations, " +
         std::to_string(turns) + " turns; shuffled output byte-identical";
}

std::string crit4() {
  std::mt19937 rng(4004);
  std::vector<Trajectory> trajs;
  std::size_t sum_len = 0, sum_back = 0;
  for (int i = 0; i < 1000; ++i) {
    const int len = std::uniform_int_distribution<int>(1, 15)(rng);
    Trajectory t{"task " + std::to_string(i), {}, "acc"};
    for (int k = 1; k <= len; ++k) {
      Action a = k == len ? Action(act::Terminate{TerminateStatus::Success})
                          : testing::random_body_action(rng);
      t.steps.push_back({k, {"e" + std::to_string(i) + "/" + std::to_string(k), ScreenSize(1080, 2400)},
                         std::move(a), std::nullopt});
    }
    sum_len += len;
    sum_back += len - 1;
    trajs.push_back(std::move(t));
  }
  const auto tmpl = PlanningTemplates::load(asset_dir() / "templates");
  const auto r = transform_corpus(trajs, {HistoryMode::Action, true}, tmpl);
  expect(r.skipped.empty(), "trajectories skipped");
  expect(r.samples.size() == sum_len, "sample total != sum of lengths");
  std::size_t backs = 0;
  for (const auto& s : r.samples) {
    // sample_id = acc/<ordinal>/<step>
    const auto a = s.sample_id.find('/'), b = s.sample_id.rfind('/');
    const auto ord = std::stoul(s.sample_id.substr(a + 1, b - a - 1));
    const auto n = std::stoul(s.sample_id.substr(b + 1));
    const Trajectory& t = trajs.at(ord - 1);
    expect(static_cast<std::size_t>(s.step_index) == n, "step index mismatch");
    expect(s.target_forward == t.steps[n - 1].action, "forward target mismatch");
    if (n >= 2) {
      expect(s.target_back && *s.target_back == t.steps[n - 2].action,
             "back target mismatch at " + s.sample_id);
      ++backs;
    } else {
      expect(!s.target_back, "back target on first step");
    }
  }
  expect(backs == sum_back, "back-target count mismatch");
  return "1000 trajectories, " + std::to_string(sum_len) + " samples, " +
         std::to_string(backs) + " back targets, all match recount";
}

std::string crit5() {
  std::mt19937 rng(5005);
  for (int i = 0; i < 20; ++i) {
    const auto f = testing::random_eval_fixture(rng, 200);
    const auto r = evaluate(f.gold, f.preds);
    const auto o = testing::oracle_recount(f);
    expect(static_cast<long>(r.total.type_ok) == o.type_ok &&
               static_cast<long>(r.total.grounding_ok) == o.grounding_ok &&
               static_cast<long>(r.total.grounding_n) == o.grounding_n &&
               static_cast<long>(r.total.success) == o.success,
           "fixture " + std::to_string(i) + " disagrees with recount");
    const double n = static_cast<double>(o.n);
    if (o.n) {
      expect(r.type_acc() == o.type_ok / n && r.sr() == o.success / n,
             "fraction mismatch on fixture " + std::to_string(i));
    }
    if (o.grounding_n)
      expect(r.grounding_acc() == o.grounding_ok / static_cast<double>(o.grounding_n),
             "grounding fraction mismatch on fixture " + std::to_string(i));
    expect(r.sr() <= r.type_acc(), "sr > type");
  }
  const auto h = testing::hand_built_fixture();
  const auto r = evaluate(h.gold, h.preds);
  expect(r.type_acc() == 0.9, "hand-built type != 0.900");
  expect(r.sr() == 0.7, "hand-built sr != 0.700");
  expect(r.grounding_acc() == 2.0 / 3.0, "hand-built grounding != 2/3");
  char buf[96];
  std::snprintf(buf, sizeof buf, "hand-built type=%.3f grounding=%.3f sr=%.3f", r.type_acc(),
                *r.grounding_acc(), r.sr());
  return "20 random fixtures equal the recount; " + std::string(buf);
}

std::string crit6() {
  const auto f = testing::text_only_fixture();
  const auto r = evaluate(f.gold, f.preds);
  expect(r.grounding_acc() == 0.0, "grounding is not 0.0");
  expect(r.type_acc() > 0.0, "type accuracy is 0");
  char buf[96];
  std::snprintf(buf, sizeof buf, "type=%.3f grounding=%.3f over %zu coordinate steps",
                r.type_acc(), *r.grounding_acc(), r.total.grounding_n);
  return buf;
}

std::string crit7() {
  std::vector<Trajectory> ts;
  int id = 0;
  for (int len : {7, 9, 10, 8}) {
    Trajectory t{"t", {}, "x"};
    for (int k = 1; k <= len; ++k)
      t.steps.push_back({k, {"s" + std::to_string(id++), ScreenSize(10, 10)}, act::Wait{},
                         std::nullopt});
    ts.push_back(t);
  }
  const auto r = compute_stats({}, ts);
  expect(r.total.avg_steps_tenths && format_tenths(*r.total.avg_steps_tenths) == "8.5",
         "avg_steps != 8.5");

  std::mt19937 rng(7007);
  const auto g = synth_grounding(7007, 5000, 800);
  const auto t = synth_trajectories(7007, 400);
  const auto whole = compute_stats(g, t);
  for (int split = 0; split < 50; ++split) {
    // Random disjoint split: whole screenshots and whole trajectories.
    const auto salt = rng();
    std::vector<GroundingRecord> g1, g2;
    for (const auto& rec : g)
      ((std::hash<std::string>{}(rec.screenshot_ref) ^ salt) % 2 ? g1 : g2).push_back(rec);
    std::vector<Trajectory> t1, t2;
    for (const auto& tr : t) (rng() % 2 ? t1 : t2).push_back(tr);
    const auto a = compute_stats(g1, t1), b = compute_stats(g2, t2);
    expect(a.total.elements + b.total.elements == whole.total.elements &&
               a.total.screenshots + b.total.screenshots == whole.total.screenshots &&
               a.total.traces + b.total.traces == whole.total.traces &&
               a.total.steps + b.total.steps == whole.total.steps &&
               avg_tenths(a.total.steps + b.total.steps, a.total.traces + b.total.traces) ==
                   whole.total.avg_steps_tenths,
           "additivity broken on split " + std::to_string(split));
  }
  return "[7,9,10,8] -> 8.5; additivity over 50 random splits";
}

std::string crit8() {
  testing::TempDir a, b;
  const fs::path fixtures = GUIPREP_FIXTURE_DIR;
  // Same output path both runs so the config echo is comparable too.
  const fs::path out = a / "run";
  auto r = testing::run_fixture_pipeline(fixtures, out);
  expect(r.code == 0, "pipeline failed: " + r.err);
  const auto first = testing::snapshot(out);
  fs::rename(out, b / "first");
  r = testing::run_fixture_pipeline(fixtures, out);
  expect(r.code == 0, "second pipeline run failed: " + r.err);
  const auto second = testing::snapshot(out);
  expect(first == second, "artifacts differ between runs");
  return std::to_string(first.size()) + " artifacts byte-identical across two runs";
}

std::string crit9() {
  testing::StubServer stub([](const nlohmann::json& req, int) {
    const std::string id = req["sample_id"];
    const int n = std::stoi(id.substr(id.rfind('/') + 1));
    return testing::text_reply("click(x=0." + std::to_string(100 + n) + ", y=0.5)",
                               std::chrono::milliseconds(2 + (n * 7) % 11));
  });
  std::vector<PlanningSample> samples;
  for (int i = 1; i <= 100; ++i)
    samples.push_back({"stub/1/" + std::to_string(i), "t", "None.", "s.png",
                       ScreenSize(100, 100), i, act::Wait{}, std::nullopt,
                       HistoryMode::Action, "", "p", {}});
  EndpointConfig cfg;
  cfg.base_url = stub.url();
  cfg.max_in_flight = 4;
  cfg.max_retries = 0;
  cfg.timeout_seconds = 10;
  const auto out = batch_infer(cfg, samples);
  expect(out.size() == 100, "record count != 100");
  for (int i = 0; i < 100; ++i) {
    expect(out[i].sample_id == samples[i].sample_id, "records out of order");
    const Action* a = out[i].action();
    expect(a && a->point()->x_milli() == 100 + i + 1, "wrong answer for " + out[i].sample_id);
  }
  expect(stub.peak_concurrency() <= 4, "stub saw " + std::to_string(stub.peak_concurrency()) +
                                           " concurrent requests");
  return "100 ordered records, peak concurrency " + std::to_string(stub.peak_concurrency()) +
         " (limit 4)";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "coordinate round-trip", 5, crit1},
      {2, "action grammar round-trip and fuzz", 30, crit2},
      {3, "merge conservation", 10, crit3},
      {4, "back-tracking transform oracle", 5, crit4},
      {5, "evaluator oracle equivalence", 0, crit5},
      {6, "text-only predictions score zero grounding", 0, crit6},
      {7, "stats correctness", 0, crit7},
      {8, "end-to-end determinism", 60, crit8},
      {9, "model-client contract", 0, crit9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.limit_seconds > 0 && secs > c.limit_seconds) {
      ok = false;
      detail += "; exceeded " + std::to_string(static_cast<int>(c.limit_seconds)) + " s";
    }
    failed += !ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name
              << "): " << detail << " [" << timing << "]\n";
  }
  return failed ? 1 : 0;
}
