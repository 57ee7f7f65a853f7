#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixlab/corpus.hpp"
#include "fixlab/taxonomy.hpp"

namespace fixlab {

/// Why a raw supervision record was rejected. ParseError is only produced
/// by the endpoint path (unparseable response text); the rest come from the
/// schema validator.
enum class RejectReason {
  UnknownFixType = 0,
  UnknownTag,
  EmptyTrace,
  DuplicateTag,
  TraceTooLong,
  ParseError,
};

inline constexpr std::size_t kNumRejectReasons = 6;

const char* to_string(RejectReason reason);

/// Untrusted supervision as it arrives off the wire.
struct RawSupervision {
  std::string fix_type;
  std::vector<std::string> trace;

  bool operator==(const RawSupervision&) const = default;
};

struct ValidationResult {
  std::optional<TeacherSupervision> supervision; // set iff accepted
  std::optional<RejectReason> reason;            // set iff rejected

  bool accepted() const { return supervision.has_value(); }
};

/// Total function: never throws, every input is either accepted or rejected
/// with a reason. Checks, in order: fix type known, every tag known, trace
/// non-empty, no duplicate tags, trace within the length cap.
ValidationResult validate_supervision(const RawSupervision& raw, SupervisionSource source);

/// Rule table mapping a fix type to its tag expansion. `base` tags always
/// fire; `extra` tags fire when the named predicate holds for the injected
/// edit. Exposed as data so the oracle's behavior is versioned and diffable.
struct TeacherRule {
  std::vector<ReasoningTag> base;
  std::vector<std::pair<std::string, ReasoningTag>> extra; // predicate name, tag

  bool operator==(const TeacherRule&) const = default;
};

struct TeacherRuleTable {
  std::string version;
  std::array<TeacherRule, kNumFixTypes> rules; // indexed by FixType

  bool operator==(const TeacherRuleTable&) const = default;
};

const TeacherRuleTable& teacher_rules();
std::string teacher_rules_to_json();

/// Deterministic teacher: expands (gold fix type, injected edit) through the
/// rule table. Throws MissingProvenance when the example carries no edit
/// record. The result is always valid and tagged with the oracle source.
TeacherSupervision oracle_supervise(const Example& example);

/// Prompt sent to a live teacher endpoint.
std::string render_teacher_prompt(const Example& example);

struct TeacherEndpointConfig {
  std::string base_url;              // e.g. "http://127.0.0.1:8700"
  std::string path = "/v1/complete";
  std::string model = "teacher-large";
  double temperature = 0.0;
  int max_attempts = 4;                     // 1 try + 3 retries
  std::vector<int> backoff_ms = {1000, 2000, 4000};
  std::string auth_token_env = "FIXLAB_TEACHER_TOKEN";
  int timeout_seconds = 30;
  std::size_t concurrency = 1;
};

/// One endpoint call, validated. Transport failures are retried on the
/// backoff schedule and raise TransportError once attempts are exhausted.
/// Unparseable or schema-invalid responses are NOT retried: they come back
/// as an invalid supervision with the reject reason.
struct LlmSuperviseResult {
  TeacherSupervision supervision; // valid == false when rejected
  std::optional<RejectReason> reason;
};

LlmSuperviseResult llm_supervise(const Example& example, const TeacherEndpointConfig& config);

struct FilterReport {
  std::size_t total = 0;
  std::size_t retained = 0;
  std::array<std::size_t, kNumRejectReasons> rejected{}; // indexed by RejectReason

  std::size_t rejected_total() const;
  std::string to_json() const;
  bool operator==(const FilterReport&) const = default;
};

enum class TeacherMode { Oracle, Llm };

/// Attaches supervision to every example. Oracle mode is total on
/// provenance-bearing corpora; endpoint mode drops examples whose
/// supervision fails validation and accounts for every drop.
std::pair<Dataset, FilterReport> supervise_dataset(const Dataset& dataset, TeacherMode mode,
                                                   const TeacherEndpointConfig* config = nullptr);

} // namespace fixlab
