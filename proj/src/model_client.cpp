#include "guiprep/model_client.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "httplib.h"

namespace guiprep {

namespace {

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;    // prefix + "/predict"
};

Target split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw std::invalid_argument("base_url: missing scheme in '" + url + "'");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http")
    throw std::invalid_argument("base_url: unsupported scheme '" + scheme + "'");
  const auto slash = url.find('/', scheme_end + 3);
  Target t;
  t.origin = url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  t.path = prefix + "/predict";
  if (t.origin.size() == scheme_end + 3)
    throw std::invalid_argument("base_url: missing host in '" + url + "'");
  return t;
}

bool retryable(const PredictionError& e, int status) {
  switch (e.kind) {
    case PredictionErrorKind::Timeout:
    case PredictionErrorKind::Transport:
      return true;
    case PredictionErrorKind::HttpStatus:
      return status >= 500 || status == 429;
    default:
      return false;
  }
}

std::chrono::milliseconds backoff(const EndpointConfig& cfg, int attempt) {
  const double ms = cfg.backoff_initial.count() * std::pow(2.0, attempt);
  return std::chrono::milliseconds(
      static_cast<long long>(std::min(ms, static_cast<double>(cfg.backoff_max.count()))));
}

RequestOutcome attempt(httplib::Client& cli, const Target& t, const EndpointConfig& cfg,
                       const std::string& body, int& status) {
  status = 0;
  const auto start = std::chrono::steady_clock::now();
  auto res = cli.Post(t.path, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // A read that ran out the clock is a timeout; httplib reports both as Read.
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read &&
                            elapsed >= cfg.timeout_seconds * 0.9);
    return PredictionError{
        timed_out ? PredictionErrorKind::Timeout : PredictionErrorKind::Transport,
        httplib::to_string(err)};
  }
  status = res->status;
  if (status < 200 || status >= 300)
    return PredictionError{PredictionErrorKind::HttpStatus, "HTTP " + std::to_string(status)};
  const Json j = Json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return PredictionError{PredictionErrorKind::MalformedResponse, "response is not a JSON object"};
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string())
    return PredictionError{PredictionErrorKind::MalformedResponse,
                           "response has no string member 'text'"};
  return text->get<std::string>();
}

httplib::Client make_client(const EndpointConfig& cfg, const Target& t) {
  httplib::Client cli(t.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(cfg.timeout_seconds));
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  if (cfg.auth_token) cli.set_bearer_token_auth(*cfg.auth_token);
  return cli;
}

RequestOutcome request_with(httplib::Client& cli, const Target& t, const EndpointConfig& cfg,
                            const PlanningSample& s) {
  const std::string body = request_body(s);
  for (int i = 0;; ++i) {
    int status = 0;
    RequestOutcome out = attempt(cli, t, cfg, body, status);
    const auto* err = std::get_if<PredictionError>(&out);
    if (!err || i >= cfg.max_retries || !retryable(*err, status)) {
      if (err && i > 0) {
        auto e = *err;
        e.message += " after " + std::to_string(i + 1) + " attempts";
        return e;
      }
      return out;
    }
    std::this_thread::sleep_for(backoff(cfg, i));
  }
}

PredictionRecord to_record(const PlanningSample& s, RequestOutcome out, bool extract) {
  if (auto* text = std::get_if<std::string>(&out))
    return classify_prediction(s.sample_id, std::move(*text), extract);
  return {s.sample_id, "", std::get<PredictionError>(std::move(out))};
}

}  // namespace

void EndpointConfig::validate() const {
  split_url(base_url);
  if (!(timeout_seconds > 0) || !std::isfinite(timeout_seconds))
    throw std::invalid_argument("timeout must be > 0");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be >= 1");
  if (backoff_initial.count() < 0 || backoff_max.count() < 0)
    throw std::invalid_argument("backoff must be >= 0");
}

std::optional<std::string> auth_token_from_env() {
  const char* v = std::getenv(kAuthTokenEnv);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

std::string request_body(const PlanningSample& s) {
  return JsonLine()
      .field("sample_id", s.sample_id)
      .field("task", s.task)
      .field("history_text", s.history_text)
      .field("image_ref", s.current_screenshot_ref)
      .field("prompt", s.prompt)
      .str();
}

RequestOutcome request_prediction(const EndpointConfig& cfg, const PlanningSample& s) {
  cfg.validate();
  const Target t = split_url(cfg.base_url);
  auto cli = make_client(cfg, t);
  return request_with(cli, t, cfg, s);
}

std::vector<PredictionRecord> batch_infer(const EndpointConfig& cfg,
                                          const std::vector<PlanningSample>& samples,
                                          bool extract) {
  cfg.validate();
  const Target t = split_url(cfg.base_url);
  std::vector<std::optional<PredictionRecord>> slots(samples.size());
  std::atomic<std::size_t> next{0};
  // Each worker issues one request at a time, so the worker count is the
  // in-flight bound.
  auto worker = [&] {
    auto cli = make_client(cfg, t);
    for (std::size_t i; (i = next.fetch_add(1)) < samples.size();)
      slots[i] = to_record(samples[i], request_with(cli, t, cfg, samples[i]), extract);
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.max_in_flight), samples.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::vector<PredictionRecord> out;
  out.reserve(samples.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace guiprep
