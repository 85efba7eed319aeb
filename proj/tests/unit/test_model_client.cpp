#include <cstdlib>

#include "doctest.h"
#include "guiprep/model_client.h"
#include "support/stub_server.h"

using namespace guiprep;
using namespace std::chrono_literals;
using guiprep::testing::StubReply;
using guiprep::testing::StubServer;
using guiprep::testing::text_reply;

namespace {

PlanningSample sample(int i) {
  PlanningSample s{"src/1/" + std::to_string(i),
                   "book a table",
                   "None.",
                   "shot" + std::to_string(i) + ".png",
                   ScreenSize(1080, 2400),
                   i,
                   act::Wait{},
                   std::nullopt,
                   HistoryMode::Action,
                   "Next action: wait()",
                   "prompt " + std::to_string(i),
                   {}};
  return s;
}

std::vector<PlanningSample> samples(int n) {
  std::vector<PlanningSample> out;
  for (int i = 1; i <= n; ++i) out.push_back(sample(i));
  return out;
}

EndpointConfig config(const StubServer& s, int retries = 0, int in_flight = 4) {
  EndpointConfig c;
  c.base_url = s.url();
  c.timeout_seconds = 5;
  c.max_retries = retries;
  c.max_in_flight = in_flight;
  c.backoff_initial = 1ms;
  c.backoff_max = 4ms;
  return c;
}

}  // namespace

TEST_CASE("echo endpoint returns text verbatim") {
  StubServer stub([](const nlohmann::json&, int) { return text_reply("click(x=0.500, y=0.500)"); });
  auto cfg = config(stub);
  cfg.auth_token = "secret";
  const auto out = request_prediction(cfg, sample(1));
  REQUIRE(std::holds_alternative<std::string>(out));
  CHECK(std::get<std::string>(out) == "click(x=0.500, y=0.500)");
  CHECK(stub.last_auth() == "Bearer secret");

  const auto body = nlohmann::json::parse(stub.bodies().at(0));
  CHECK(body["sample_id"] == "src/1/1");
  CHECK(body["image_ref"] == "shot1.png");
  CHECK(body["task"] == "book a table");
  CHECK(body["history_text"] == "None.");
  CHECK(body["prompt"] == "prompt 1");
}

TEST_CASE("transient 500s are retried") {
  StubServer stub([](const nlohmann::json&, int call) {
    return call <= 2 ? StubReply{500, "oops"} : text_reply("wait()");
  });
  const auto ok = request_prediction(config(stub, 3), sample(1));
  CHECK(std::get<std::string>(ok) == "wait()");
  CHECK(stub.total_requests() == 3);

  const auto exhausted = request_prediction(config(stub, 1), sample(2));
  REQUIRE(std::holds_alternative<PredictionError>(exhausted));
  CHECK(std::get<PredictionError>(exhausted).kind == PredictionErrorKind::HttpStatus);
}

TEST_CASE("non-transient failures are not retried") {
  StubServer stub([](const nlohmann::json& req, int) {
    if (req["sample_id"] == "src/1/1") return StubReply{404, "{}"};
    if (req["sample_id"] == "src/1/2") return StubReply{200, "not json"};
    return StubReply{200, R"({"answer":"x"})"};
  });
  const auto cfg = config(stub, 3);
  CHECK(std::get<PredictionError>(request_prediction(cfg, sample(1))).kind ==
        PredictionErrorKind::HttpStatus);
  CHECK(std::get<PredictionError>(request_prediction(cfg, sample(2))).kind ==
        PredictionErrorKind::MalformedResponse);
  CHECK(std::get<PredictionError>(request_prediction(cfg, sample(3))).kind ==
        PredictionErrorKind::MalformedResponse);
  CHECK(stub.total_requests() == 3);
}

TEST_CASE("slow endpoint times out") {
  StubServer stub([](const nlohmann::json&, int) { return text_reply("wait()", 1500ms); });
  auto cfg = config(stub, 0);
  cfg.timeout_seconds = 0.3;
  const auto out = request_prediction(cfg, sample(1));
  REQUIRE(std::holds_alternative<PredictionError>(out));
  CHECK(std::get<PredictionError>(out).kind == PredictionErrorKind::Timeout);
}

TEST_CASE("unreachable endpoint is a transport error for every sample") {
  EndpointConfig cfg;
  {
    StubServer gone([](const nlohmann::json&, int) { return text_reply(""); });
    cfg = config(gone, 1);
  }
  const auto out = batch_infer(cfg, samples(3));
  REQUIRE(out.size() == 3);
  for (const auto& r : out) {
    REQUIRE(std::holds_alternative<PredictionError>(r.parsed));
    CHECK(std::get<PredictionError>(r.parsed).kind == PredictionErrorKind::Transport);
  }
}

TEST_CASE("batch_infer order, bound and per-sample failure") {
  StubServer stub([](const nlohmann::json& req, int) {
    const std::string id = req["sample_id"];
    if (id == "src/1/5") return StubReply{503, "down"};
    // Later samples answer sooner, so completion order is scrambled.
    const int n = std::stoi(id.substr(id.rfind('/') + 1));
    return text_reply("I pick click(x=0." + std::to_string(n) + ", y=0.5)",
                      std::chrono::milliseconds(5 * (11 - n)));
  });
  const auto out = batch_infer(config(stub, 0, 3), samples(10), true);
  REQUIRE(out.size() == 10);
  int parsed = 0;
  for (int i = 0; i < 10; ++i) {
    CHECK(out[i].sample_id == "src/1/" + std::to_string(i + 1));
    parsed += out[i].action() != nullptr;
  }
  CHECK(parsed == 9);
  CHECK(std::get<PredictionError>(out[4].parsed).kind == PredictionErrorKind::HttpStatus);
  CHECK(*out[2].action() == Action(act::Click{NormPoint::from_milli(300, 500)}));
  CHECK(stub.peak_concurrency() <= 3);
  CHECK(stub.peak_concurrency() >= 1);

  CHECK(batch_infer(config(stub), {}).empty());
}

TEST_CASE("endpoint config validation") {
  EndpointConfig c;
  c.base_url = "http://localhost:8080/v1/";
  CHECK_NOTHROW(c.validate());
  c.timeout_seconds = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.timeout_seconds = 1;
  c.max_in_flight = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.max_in_flight = 1;
  c.max_retries = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.max_retries = 0;
  c.base_url = "ftp://x";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.base_url = "localhost:8080";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  ::setenv(kAuthTokenEnv, "tok", 1);
  CHECK(auth_token_from_env() == "tok");
  ::setenv(kAuthTokenEnv, "", 1);
  CHECK_FALSE(auth_token_from_env().has_value());
  ::unsetenv(kAuthTokenEnv);
}

TEST_CASE("path prefix is honoured") {
  httplib::Server srv;
  srv.Post("/v1/predict", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"j({"text":"wait()"})j", "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  std::thread th([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  EndpointConfig c;
  c.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1/";
  c.max_retries = 0;
  const auto out = request_prediction(c, sample(1));
  srv.stop();
  th.join();
  CHECK(std::get<std::string>(out) == "wait()");
}
