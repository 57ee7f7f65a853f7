#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "fixlab/error.hpp"
#include "fixlab/teacher.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;

std::string quoted(const std::string& text) {
  return Json(text).dump();
}

std::optional<RawSupervision> parse_response_text(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  if (!j.contains("fix_type") || !j["fix_type"].is_string()) return std::nullopt;
  if (!j.contains("trace") || !j["trace"].is_array()) return std::nullopt;
  RawSupervision raw;
  raw.fix_type = j["fix_type"].get<std::string>();
  for (const Json& t : j["trace"]) {
    if (!t.is_string()) return std::nullopt;
    raw.trace.push_back(t.get<std::string>());
  }
  return raw;
}

LlmSuperviseResult parse_error_result() {
  TeacherSupervision sup;
  sup.source = SupervisionSource::Llm;
  sup.valid = false;
  return {std::move(sup), RejectReason::ParseError};
}

} // namespace

std::string render_teacher_prompt(const Example& example) {
  std::string prompt;
  prompt += "Classify the single injected bug in this C program.\n";
  prompt += "Choose fix_type from:";
  for (FixType type : all_fix_types()) {
    prompt += ' ';
    prompt += to_string(type);
  }
  prompt += "\nChoose trace tags (ordered, no repeats, at most " +
            std::to_string(kMaxTraceLength) + ") from:";
  for (ReasoningTag tag : all_reasoning_tags()) {
    prompt += ' ';
    prompt += to_string(tag);
  }
  prompt += "\n\nProgram:\n";
  prompt += example.buggy_source;
  prompt += "\nFailing behavior:\n";
  for (const FailingBehavior& b : example.failing_behavior) {
    prompt += "- input " + quoted(b.input) + " expected " + quoted(b.expected_output) +
              ": " + b.observed + "\n";
  }
  prompt += "\nAnswer with JSON only: {\"fix_type\": \"...\", \"trace\": [\"...\"]}\n";
  return prompt;
}

LlmSuperviseResult llm_supervise(const Example& example, const TeacherEndpointConfig& config) {
  if (config.base_url.empty()) {
    raise(ErrorCode::ConfigError, "teacher endpoint base_url is empty");
  }
  httplib::Client client(config.base_url);
  client.set_connection_timeout(config.timeout_seconds, 0);
  client.set_read_timeout(config.timeout_seconds, 0);

  httplib::Headers headers;
  if (const char* token = std::getenv(config.auth_token_env.c_str());
      token != nullptr && *token != '\0') {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  Json body;
  body["model"] = config.model;
  body["prompt"] = render_teacher_prompt(example);
  body["temperature"] = config.temperature;
  const std::string payload = body.dump();

  int attempts = std::max(1, config.max_attempts);
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::size_t slot = static_cast<std::size_t>(attempt - 1);
      int wait = 0;
      if (!config.backoff_ms.empty()) {
        wait = config.backoff_ms[std::min(slot, config.backoff_ms.size() - 1)];
      }
      if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
    }
    httplib::Result res = client.Post(config.path, headers, payload, "application/json");
    if (!res) {
      last_failure = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_failure = "unexpected HTTP status " + std::to_string(res->status);
      continue;
    }
    Json j = Json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text") || !j["text"].is_string()) {
      return parse_error_result();
    }
    auto raw = parse_response_text(j["text"].get<std::string>());
    if (!raw) return parse_error_result();
    ValidationResult checked = validate_supervision(*raw, SupervisionSource::Llm);
    if (checked.accepted()) return {*checked.supervision, std::nullopt};
    TeacherSupervision sup;
    sup.source = SupervisionSource::Llm;
    sup.valid = false;
    return {std::move(sup), checked.reason};
  }
  raise(ErrorCode::TransportError, "teacher endpoint unreachable after " +
                                       std::to_string(attempts) + " attempts (" + last_failure + ")");
}

} // namespace fixlab
