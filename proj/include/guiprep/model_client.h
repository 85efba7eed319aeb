#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "guiprep/evaluator.h"
#include "guiprep/planning.h"

namespace guiprep {

inline constexpr const char* kAuthTokenEnv = "GUIPREP_AUTH_TOKEN";

struct EndpointConfig {
  // http://host[:port][/prefix]; requests go to {base_url}/predict.
  std::string base_url;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int max_in_flight = 4;
  std::chrono::milliseconds backoff_initial{200};
  std::chrono::milliseconds backoff_max{5000};
  std::optional<std::string> auth_token;  // sent as a Bearer header

  // Throws std::invalid_argument naming the bad field.
  void validate() const;
};

// Reads the token from the environment; nullopt when unset or empty.
std::optional<std::string> auth_token_from_env();

// {sample_id, task, history_text, image_ref, prompt}
std::string request_body(const PlanningSample& s);

using RequestOutcome = std::variant<std::string, PredictionError>;

// One sample, retrying timeouts, connection failures, 5xx and 429 with
// exponential backoff. Returns the response "text" verbatim.
RequestOutcome request_prediction(const EndpointConfig& cfg, const PlanningSample& s);

// Bounded concurrent inference. Results are in sample order; per-sample
// failures become error records.
std::vector<PredictionRecord> batch_infer(const EndpointConfig& cfg,
                                          const std::vector<PlanningSample>& samples,
                                          bool extract = false);

}  // namespace guiprep
