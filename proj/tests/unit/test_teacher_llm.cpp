#include <cstdlib>
#include <string>
#include <vector>

#include <doctest.h>
#include <fixlab/corpus.hpp>
#include <fixlab/error.hpp>
#include <fixlab/teacher.hpp>
#include <json.hpp>

#include "stub_teacher.hpp"

using namespace fixlab;
using testsup::StubTeacher;
using testsup::teacher_payload;

namespace {

TeacherEndpointConfig fast_config(const std::string& base_url) {
  TeacherEndpointConfig config;
  config.base_url = base_url;
  config.backoff_ms = {1, 2};
  config.timeout_seconds = 5;
  config.auth_token_env = "FIXLAB_TEST_TOKEN_UNSET";
  return config;
}

Example sample_example() {
  Dataset ds = generate_corpus(builtin_templates(), 1, 5);
  return ds.examples.front();
}

} // namespace

TEST_CASE("a well-formed endpoint answer becomes llm supervision, order preserved") {
  StubTeacher stub([](std::size_t, const std::string&) {
    return std::make_pair(200, teacher_payload("LOOP_BOUND", {"CONST_ERROR", "CMP_ERROR"}));
  });
  Example ex = sample_example();
  LlmSuperviseResult result = llm_supervise(ex, fast_config(stub.base_url()));

  CHECK(result.supervision.valid);
  CHECK_FALSE(result.reason.has_value());
  CHECK(result.supervision.source == SupervisionSource::Llm);
  CHECK(result.supervision.fix_type == FixType::LOOP_BOUND);
  CHECK(result.supervision.trace.tags ==
        std::vector<ReasoningTag>{ReasoningTag::CONST_ERROR, ReasoningTag::CMP_ERROR});
  CHECK(stub.call_count() == 1);
}

TEST_CASE("the request carries model, prompt and temperature") {
  StubTeacher stub([](std::size_t, const std::string&) {
    return std::make_pair(200, teacher_payload("IO_FORMAT", {"IO_ERROR"}));
  });
  Example ex = sample_example();
  TeacherEndpointConfig config = fast_config(stub.base_url());
  config.model = "probe-model";
  config.temperature = 0.25;
  llm_supervise(ex, config);

  REQUIRE(stub.call_count() == 1);
  nlohmann::json body = nlohmann::json::parse(stub.bodies()[0]);
  CHECK(body["model"] == "probe-model");
  CHECK(body["temperature"] == 0.25);
  CHECK(body["prompt"] == render_teacher_prompt(ex));
}

TEST_CASE("the prompt names the program, the labels and the failing behavior") {
  Example ex = sample_example();
  std::string prompt = render_teacher_prompt(ex);
  CHECK(prompt.find(ex.buggy_source) != std::string::npos);
  for (FixType type : all_fix_types()) {
    CHECK(prompt.find(to_string(type)) != std::string::npos);
  }
  for (ReasoningTag tag : all_reasoning_tags()) {
    CHECK(prompt.find(to_string(tag)) != std::string::npos);
  }
  REQUIRE_FALSE(ex.failing_behavior.empty());
  CHECK(prompt.find(ex.failing_behavior[0].observed) != std::string::npos);
  CHECK(prompt.find("{\"fix_type\": \"...\", \"trace\": [\"...\"]}") != std::string::npos);
}

TEST_CASE("authorization header appears only when the token variable is set") {
  StubTeacher stub([](std::size_t, const std::string&) {
    return std::make_pair(200, teacher_payload("WRONG_CONSTANT", {"CONST_ERROR"}));
  });
  Example ex = sample_example();
  TeacherEndpointConfig config = fast_config(stub.base_url());
  config.auth_token_env = "FIXLAB_TEST_TOKEN_A";

  ::unsetenv("FIXLAB_TEST_TOKEN_A");
  llm_supervise(ex, config);
  ::setenv("FIXLAB_TEST_TOKEN_A", "sekrit", 1);
  llm_supervise(ex, config);
  ::unsetenv("FIXLAB_TEST_TOKEN_A");

  std::vector<std::string> auth = stub.auth_headers();
  REQUIRE(auth.size() == 2);
  CHECK(auth[0].empty());
  CHECK(auth[1] == "Bearer sekrit");
}

TEST_CASE("schema-invalid answers are rejected without a retry") {
  StubTeacher stub([](std::size_t, const std::string&) {
    return std::make_pair(200, teacher_payload("LOOP_BOUND", {"STYLE_ISSUE"}));
  });
  LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
  CHECK_FALSE(result.supervision.valid);
  CHECK(result.reason == RejectReason::UnknownTag);
  CHECK(stub.call_count() == 1);
}

TEST_CASE("unparseable answers are parse errors, not transport errors") {
  SUBCASE("truncated inner document") {
    StubTeacher stub([](std::size_t, const std::string&) {
      return std::make_pair(200, std::string(R"({"text": "{\"fix_type\": \"LOOP"})"));
    });
    LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
    CHECK_FALSE(result.supervision.valid);
    CHECK(result.reason == RejectReason::ParseError);
    CHECK(stub.call_count() == 1);
  }
  SUBCASE("missing text key") {
    StubTeacher stub([](std::size_t, const std::string&) {
      return std::make_pair(200, std::string(R"({"output": "nope"})"));
    });
    LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
    CHECK(result.reason == RejectReason::ParseError);
  }
  SUBCASE("inner document is not an object") {
    StubTeacher stub([](std::size_t, const std::string&) {
      return std::make_pair(200, std::string(R"({"text": "[1, 2]"})"));
    });
    LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
    CHECK(result.reason == RejectReason::ParseError);
  }
  SUBCASE("trace entry is not a string") {
    StubTeacher stub([](std::size_t, const std::string&) {
      return std::make_pair(200, std::string(R"({"text": "{\"fix_type\": \"LOOP_BOUND\", \"trace\": [3]}"})"));
    });
    LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
    CHECK(result.reason == RejectReason::ParseError);
  }
}

TEST_CASE("server errors are retried on the backoff schedule") {
  StubTeacher stub([](std::size_t index, const std::string&) {
    if (index < 2) return std::make_pair(500, std::string("{}"));
    return std::make_pair(200, teacher_payload("MISSING_CASE", {"MISSING_BRANCH"}));
  });
  LlmSuperviseResult result = llm_supervise(sample_example(), fast_config(stub.base_url()));
  CHECK(result.supervision.valid);
  CHECK(result.supervision.fix_type == FixType::MISSING_CASE);
  CHECK(stub.call_count() == 3);
}

TEST_CASE("a dead endpoint raises a transport error after max attempts") {
  StubTeacher stub([](std::size_t, const std::string&) {
    return std::make_pair(500, std::string("{}"));
  });
  TeacherEndpointConfig config = fast_config(stub.base_url());
  config.max_attempts = 2;
  try {
    llm_supervise(sample_example(), config);
    FAIL("expected TransportError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TransportError);
  }
  CHECK(stub.call_count() == 2);
}

TEST_CASE("endpoint mode needs a config and a base url") {
  Dataset ds = generate_corpus(builtin_templates(), 1, 7);
  try {
    supervise_dataset(ds, TeacherMode::Llm);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
  try {
    llm_supervise(ds.examples[0], TeacherEndpointConfig{});
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("dataset supervision accounts for every response") {
  // 18 calls scripted by index: 0-8 accepted, 9-15 rejected for six distinct
  // reasons, 16-17 accepted again.
  StubTeacher stub([](std::size_t index, const std::string&) {
    std::string body;
    switch (index) {
      case 9: body = teacher_payload("TYPO", {"CMP_ERROR"}); break;
      case 10: body = teacher_payload("LOOP_BOUND", {"VIBES"}); break;
      case 11: body = teacher_payload("LOOP_BOUND", {}); break;
      case 12: body = teacher_payload("LOOP_BOUND", {"CMP_ERROR", "CMP_ERROR"}); break;
      case 13:
        body = teacher_payload("LOOP_BOUND", {"CMP_ERROR", "IO_ERROR", "CONST_ERROR",
                                              "INIT_UNSET", "INDEX_ERROR"});
        break;
      case 14: body = R"({"text": "{\"fix_type\""})"; break;
      case 15: body = R"({"words": "missing"})"; break;
      default: body = teacher_payload("IO_FORMAT", {"IO_ERROR", "CONST_ERROR"}); break;
    }
    return std::make_pair(200, body);
  });

  Dataset ds = generate_corpus(builtin_templates(), 2, 11);
  REQUIRE(ds.examples.size() == 18);
  TeacherEndpointConfig config = fast_config(stub.base_url());
  auto [kept, report] = supervise_dataset(ds, TeacherMode::Llm, &config);

  CHECK(report.total == 18);
  CHECK(report.retained == 11);
  CHECK(report.rejected_total() == 7);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::UnknownFixType)] == 1);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::UnknownTag)] == 1);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::EmptyTrace)] == 1);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::DuplicateTag)] == 1);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::TraceTooLong)] == 1);
  CHECK(report.rejected[static_cast<std::size_t>(RejectReason::ParseError)] == 2);

  REQUIRE(kept.examples.size() == 11);
  // Retained examples keep their corpus order; indices 9..15 are dropped.
  std::vector<std::string> expected_ids;
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    if (i < 9 || i > 15) expected_ids.push_back(ds.examples[i].id);
  }
  std::vector<std::string> kept_ids;
  for (const Example& ex : kept.examples) kept_ids.push_back(ex.id);
  CHECK(kept_ids == expected_ids);
  for (const Example& ex : kept.examples) {
    REQUIRE(ex.supervision.has_value());
    CHECK(ex.supervision->valid);
    CHECK(ex.supervision->source == SupervisionSource::Llm);
    CHECK(ex.supervision->fix_type == FixType::IO_FORMAT);
  }

  nlohmann::json j = nlohmann::json::parse(report.to_json());
  CHECK(j["total"] == 18);
  CHECK(j["retained"] == 11);
  CHECK(j["rejected"]["ParseError"] == 2);
  CHECK(j["rejected"]["TraceTooLong"] == 1);
}
