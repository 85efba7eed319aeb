#include <algorithm>
#include <random>

#include "doctest.h"
#include "guiprep/evaluator.h"
#include "support/eval_oracle.h"
#include "support/temp_dir.h"

using namespace guiprep;
using guiprep::testing::EvalFixture;

namespace {

PredictionRecord pred(std::string raw) { return classify_prediction("p", std::move(raw), false); }

GoldStep gold(Action a, std::optional<BBox> box = std::nullopt,
              ScreenSize s = ScreenSize(1000, 1000)) {
  return {"p", std::move(a), box, s};
}

const Action kCenter = act::Click{NormPoint::from_milli(500, 500)};

}  // namespace

TEST_CASE("match_type") {
  const auto wrong_point = pred("click(x=0.9, y=0.1)");
  CHECK(match_type(kCenter, &wrong_point));
  const auto junk = pred("click(x=");
  CHECK_FALSE(match_type(kCenter, &junk));
  const auto scroll = pred("scroll(direction=\"up\")");
  CHECK_FALSE(match_type(act::Type{"a"}, &scroll));
  CHECK_FALSE(match_type(kCenter, nullptr));
}

TEST_CASE("match_grounding rules") {
  const auto p = pred("click(x=0.5, y=0.5)");
  CHECK(match_grounding(gold(kCenter, BBox{900, 500, 1020, 580}, ScreenSize(1920, 1080)),
                        &p) == true);

  const auto back = pred("navigate_back()");
  CHECK(match_grounding(gold(kCenter), &back) == false);
  CHECK_FALSE(match_grounding(gold(act::Scroll{ScrollDirection::Down}), &p).has_value());
  CHECK(match_grounding(gold(kCenter), nullptr) == false);

  // sqrt(0.02) = 0.1414... is just past the default threshold.
  const auto diag = pred("click(x=0.6, y=0.6)");
  CHECK(match_grounding(gold(kCenter), &diag) == false);
  CHECK(match_grounding(gold(kCenter), &diag, {GroundingRule::Box, 0.15}) == true);
  const auto straight = pred("click(x=0.64, y=0.5)");
  CHECK(match_grounding(gold(kCenter), &straight) == true);

  // A box far from the prediction fails under rule A but the distance rule
  // ignores it.
  const auto near = pred("click(x=0.55, y=0.5)");
  const auto boxed = gold(kCenter, BBox{490, 490, 510, 510});
  CHECK(match_grounding(boxed, &near) == false);
  CHECK(match_grounding(boxed, &near, {GroundingRule::Distance, 0.14}) == true);

  // Long press grounds like click.
  const auto lp = pred("long_press(x=0.5, y=0.5)");
  CHECK(match_grounding(gold(act::LongPress{NormPoint::from_milli(500, 500)}), &lp) == true);
}

TEST_CASE("match_step payload rules") {
  const auto exact = pred("click(x=0.500, y=0.500)");
  const auto v = match_step(gold(kCenter), &exact);
  CHECK((v.type_ok && v.payload_ok && v.success && v.grounding_ok == true));

  const auto loose = pred("type(text=\"  hello   world \")");
  CHECK(match_step(gold(act::Type{"Hello World"}), &loose).success);
  CHECK_FALSE(match_step(gold(act::Type{"Hello World"}), &loose, {.exact_text = true}).success);
  CHECK(normalize_text("\t A\n\nb  ") == "a b");
  CHECK(normalize_text("   ") == "");

  const auto far = pred("click(x=0.9, y=0.9)");
  const auto miss = match_step(gold(kCenter), &far);
  CHECK(miss.type_ok);
  CHECK(miss.grounding_ok == false);
  CHECK_FALSE(miss.success);

  const auto app = pred("open_app(name=\"GMAIL\")");
  CHECK(match_step(gold(act::OpenApp{"Gmail"}), &app).success);
  const auto up = pred("scroll(direction=\"up\")");
  CHECK_FALSE(match_step(gold(act::Scroll{ScrollDirection::Down}), &up).success);
  const auto fail = pred("terminate(status=\"failure\")");
  CHECK_FALSE(match_step(gold(act::Terminate{TerminateStatus::Success}), &fail).success);
  const auto wait = pred("wait()");
  CHECK(match_step(gold(act::Wait{}), &wait).success);
  CHECK_FALSE(match_step(gold(act::Wait{}), nullptr).success);
}

TEST_CASE("hand-built fixture") {
  const EvalFixture f = testing::hand_built_fixture();
  const auto r = evaluate(f.gold, f.preds);
  CHECK(r.n_steps() == 10);
  CHECK(r.type_acc() == 0.9);
  CHECK(r.sr() == 0.7);
  CHECK(r.grounding_acc() == 2.0 / 3.0);
  CHECK(r.by_kind[static_cast<int>(ActionKind::Click)].n == 3);
  CHECK(r.by_kind[static_cast<int>(ActionKind::Click)].success == 2);

  const Json j = report_json(r);
  CHECK(j["config"]["grounding_rule"] == "box");
  CHECK(j["config"]["distance_threshold"] == 0.14);
  CHECK(j["by_kind"]["type"]["sr"] == 0.5);
  CHECK_FALSE(j["by_kind"].contains("long_press"));
  CHECK(report_summary(r).find("type=0.900 grounding=0.667 sr=0.700") != std::string::npos);
}

TEST_CASE("degenerate prediction sets") {
  const EvalFixture f = testing::hand_built_fixture();
  std::vector<PredictionRecord> junk;
  for (const auto& g : f.gold) junk.push_back(classify_prediction(g.sample_id, "??", false));
  const auto r = evaluate(f.gold, junk);
  CHECK(r.type_acc() == 0.0);
  CHECK(r.grounding_acc() == 0.0);
  CHECK(r.sr() == 0.0);
  CHECK(r.unparseable == 10);

  const std::vector<GoldStep> five(f.gold.begin(), f.gold.begin() + 5);
  const auto empty = evaluate(five, {});
  CHECK(empty.n_steps() == 5);
  CHECK(empty.missing == 5);
  CHECK(empty.type_acc() == 0.0);
  CHECK(empty.sr() == 0.0);
  CHECK(empty.grounding_acc() == 0.0);

  const auto none = evaluate({}, {});
  CHECK(none.n_steps() == 0);
  CHECK_FALSE(none.grounding_acc().has_value());
  CHECK(report_json(none)["grounding_acc"].is_null());
}

TEST_CASE("fatal prediction sets") {
  const EvalFixture f = testing::hand_built_fixture();
  auto preds = f.preds;
  preds.push_back(classify_prediction("nope", "wait()", false));
  CHECK_THROWS_WITH_AS(evaluate(f.gold, preds),
                       doctest::Contains("unknown sample_id 'nope'"), InputError);
  preds.back().sample_id = "h3";
  CHECK_THROWS_WITH_AS(evaluate(f.gold, preds), doctest::Contains("'h3'"), InputError);
  auto golds = f.gold;
  golds.push_back(golds[0]);
  CHECK_THROWS_AS(evaluate(golds, f.preds), InputError);
}

TEST_CASE("right types without coordinates score zero grounding") {
  const EvalFixture f = testing::text_only_fixture();
  const auto r = evaluate(f.gold, f.preds);
  CHECK(r.grounding_acc() == 0.0);
  CHECK(r.type_acc() == 0.5);
  CHECK(r.sr() == 0.5);
}

TEST_CASE("property: oracle equivalence, sr <= type, permutation invariance") {
  std::mt19937 rng(17);
  for (int round = 0; round < 150; ++round) {
    EvalFixture f = testing::random_eval_fixture(rng);
    const double threshold = round % 3 == 0 ? 0.05 : 0.14;
    const auto r = evaluate(f.gold, f.preds, {GroundingRule::Box, threshold});
    const auto o = testing::oracle_recount(f, threshold);
    REQUIRE(static_cast<long>(r.total.n) == o.n);
    REQUIRE(static_cast<long>(r.total.type_ok) == o.type_ok);
    REQUIRE(static_cast<long>(r.total.grounding_n) == o.grounding_n);
    REQUIRE(static_cast<long>(r.total.grounding_ok) == o.grounding_ok);
    REQUIRE(static_cast<long>(r.total.success) == o.success);
    REQUIRE(r.sr() <= r.type_acc());
    for (double v : {r.type_acc(), r.sr(), r.grounding_acc().value_or(0.0)}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }

    KindTally sum;
    for (const auto& k : r.by_kind) sum += k;
    REQUIRE(sum.success == r.total.success);

    std::shuffle(f.gold.begin(), f.gold.end(), rng);
    std::reverse(f.preds.begin(), f.preds.end());
    REQUIRE(report_json(evaluate(f.gold, f.preds, {GroundingRule::Box, threshold})).dump() ==
            report_json(r).dump());
  }
}

TEST_CASE("property: grounding depends only on coordinate-bearing steps") {
  std::mt19937 rng(23);
  for (int round = 0; round < 50; ++round) {
    EvalFixture f = testing::random_eval_fixture(rng, 80);
    const auto before = evaluate(f.gold, f.preds).grounding_acc();
    // Rewrite every prediction for non-coordinate gold steps.
    for (auto& p : f.preds) {
      const auto g = std::find_if(f.gold.begin(), f.gold.end(),
                                  [&](const GoldStep& s) { return s.sample_id == p.sample_id; });
      if (!g->gold_action.point())
        p = classify_prediction(p.sample_id, serialize_action(testing::random_action(rng)),
                                false);
    }
    REQUIRE(evaluate(f.gold, f.preds).grounding_acc() == before);
  }
}

TEST_CASE("gold and prediction files") {
  testing::TempDir dir;
  const EvalFixture f = testing::hand_built_fixture();
  std::vector<std::string> lines;
  for (const auto& g : f.gold) lines.push_back(to_jsonl(g));
  write_lines(dir / "gold.jsonl", lines);
  const auto back = read_gold_jsonl(dir / "gold.jsonl");
  REQUIRE(back.size() == f.gold.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(to_jsonl(back[i]) == lines[i]);
  CHECK(lines[0] ==
        R"j({"sample_id":"h1","gold_action":"click(x=0.200, y=0.200)",)j"
        R"j("gold_box":{"x1":150,"y1":150,"x2":250,"y2":250},"screen":{"width":1000,"height":1000}})j");

  write_lines(dir / "preds.jsonl",
              {R"j({"sample_id":"a","raw_text":"click(x=0.5, y=0.5)"})j",
               R"j({"sample_id":"b","raw_text":"I will click(x=0.5, y=0.5) now"})j",
               R"j({"sample_id":"c","raw_text":"","error":{"kind":"timeout","message":"slow"}})j"});
  const auto strict = read_predictions(dir / "preds.jsonl", false);
  REQUIRE(strict.size() == 3);
  CHECK(strict[0].action() != nullptr);
  CHECK(strict[1].action() == nullptr);
  CHECK(std::get<PredictionError>(strict[1].parsed).kind == PredictionErrorKind::Syntax);
  CHECK(std::get<PredictionError>(strict[2].parsed).kind == PredictionErrorKind::Timeout);
  const auto loose = read_predictions(dir / "preds.jsonl", true);
  REQUIRE(loose[1].action() != nullptr);
  CHECK(*loose[1].action() == kCenter);
  CHECK(to_jsonl(strict[2]) ==
        R"j({"sample_id":"c","raw_text":"","error":{"kind":"timeout","message":"slow"}})j");
  CHECK(to_jsonl(strict[1]).ends_with(R"j("error":null})j"));

  write_lines(dir / "dup.jsonl", {R"j({"sample_id":"x","raw_text":"wait()"})j",
                                  R"j({"sample_id":"x","raw_text":"wait()"})j"});
  CHECK_THROWS_WITH_AS(read_predictions(dir / "dup.jsonl", false),
                       doctest::Contains("duplicate sample_id 'x'"), InputError);
  CHECK_THROWS_AS(read_predictions(dir / "absent.jsonl", false), InputError);
}
