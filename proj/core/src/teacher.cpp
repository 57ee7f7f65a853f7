#include "fixlab/teacher.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "fixlab/error.hpp"
#include "ctoken.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;
using detail::CTokenKind;
using detail::scan_c_tokens;

const std::vector<std::string>& comparators() {
  static const std::vector<std::string> ops = {"<", "<=", ">", ">=", "==", "!="};
  return ops;
}

std::optional<std::string> first_comparator(const std::string& text) {
  for (const auto& tok : scan_c_tokens(text)) {
    if (std::find(comparators().begin(), comparators().end(), tok.text) != comparators().end()) {
      return tok.text;
    }
  }
  return std::nullopt;
}

bool is_reversal_pair(const std::string& a, const std::string& b) {
  static const std::vector<std::pair<std::string, std::string>> pairs = {
      {"<", ">"}, {">", "<"}, {"<=", ">="}, {">=", "<="}, {"==", "!="}, {"!=", "=="},
  };
  return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

bool contains_number(const std::string& text) {
  for (const auto& tok : scan_c_tokens(text)) {
    if (tok.kind == CTokenKind::Number) return true;
  }
  return false;
}

bool is_single_number(const std::string& text) {
  auto toks = scan_c_tokens(text);
  return toks.size() == 1 && toks[0].kind == CTokenKind::Number;
}

bool eval_predicate(const std::string& name, const InjectedEdit& edit) {
  if (name == "comparison-reversal") {
    auto before = first_comparator(edit.before);
    auto after = first_comparator(edit.after);
    return before && after && is_reversal_pair(*before, *after);
  }
  if (name == "comparator-edited") {
    auto before = first_comparator(edit.before);
    auto after = first_comparator(edit.after);
    return before && after && *before != *after;
  }
  if (name == "keeps-assignment") {
    return edit.after.find('=') != std::string::npos;
  }
  if (name == "constant-in-after") {
    return contains_number(edit.after);
  }
  if (name == "after-is-constant") {
    return is_single_number(edit.after);
  }
  raise(ErrorCode::ConfigError, "unknown teacher rule predicate '" + name + "'");
}

} // namespace

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::UnknownFixType: return "UnknownFixType";
    case RejectReason::UnknownTag: return "UnknownTag";
    case RejectReason::EmptyTrace: return "EmptyTrace";
    case RejectReason::DuplicateTag: return "DuplicateTag";
    case RejectReason::TraceTooLong: return "TraceTooLong";
    case RejectReason::ParseError: return "ParseError";
  }
  return "Unknown";
}

ValidationResult validate_supervision(const RawSupervision& raw, SupervisionSource source) {
  auto fix = fix_type_from_string(raw.fix_type);
  if (!fix) return {std::nullopt, RejectReason::UnknownFixType};

  ReasoningTrace trace;
  for (const std::string& name : raw.trace) {
    auto tag = reasoning_tag_from_string(name);
    if (!tag) return {std::nullopt, RejectReason::UnknownTag};
    trace.tags.push_back(*tag);
  }
  if (trace.tags.empty()) return {std::nullopt, RejectReason::EmptyTrace};
  for (std::size_t i = 0; i < trace.tags.size(); ++i) {
    for (std::size_t k = i + 1; k < trace.tags.size(); ++k) {
      if (trace.tags[i] == trace.tags[k]) return {std::nullopt, RejectReason::DuplicateTag};
    }
  }
  if (trace.tags.size() > kMaxTraceLength) return {std::nullopt, RejectReason::TraceTooLong};

  TeacherSupervision sup;
  sup.fix_type = *fix;
  sup.trace = std::move(trace);
  sup.source = source;
  sup.valid = true;
  return {std::move(sup), std::nullopt};
}

const TeacherRuleTable& teacher_rules() {
  using Tag = ReasoningTag;
  static const TeacherRuleTable table = {
      "1",
      {{
          /* WRONG_CONDITION */ {{Tag::CMP_ERROR}, {{"comparison-reversal", Tag::MISSING_BRANCH}}},
          /* LOOP_BOUND */ {{Tag::LOOP_BOUND_ERROR}, {{"comparator-edited", Tag::CMP_ERROR}}},
          /* WRONG_OPERATOR */ {{Tag::OP_SUBSTITUTION}, {}},
          /* INIT_ERROR */ {{Tag::INIT_UNSET}, {{"keeps-assignment", Tag::CONST_ERROR}}},
          /* MISSING_CASE */ {{Tag::MISSING_BRANCH}, {}},
          /* OFF_BY_ONE_INDEX */ {{Tag::INDEX_ERROR}, {{"constant-in-after", Tag::CONST_ERROR}}},
          /* WRONG_RETURN */ {{Tag::RETURN_ERROR}, {{"after-is-constant", Tag::CONST_ERROR}}},
          /* IO_FORMAT */ {{Tag::IO_ERROR}, {}},
          /* WRONG_CONSTANT */ {{Tag::CONST_ERROR}, {}},
      }},
  };
  return table;
}

std::string teacher_rules_to_json() {
  const TeacherRuleTable& table = teacher_rules();
  Json j;
  j["version"] = table.version;
  Json rules;
  for (FixType type : all_fix_types()) {
    const TeacherRule& rule = table.rules[static_cast<std::size_t>(type)];
    Json jr;
    Json base = Json::array();
    for (ReasoningTag tag : rule.base) base.push_back(to_string(tag));
    jr["base"] = std::move(base);
    Json extra = Json::array();
    for (const auto& [when, tag] : rule.extra) {
      extra.push_back(Json{{"when", when}, {"add", to_string(tag)}});
    }
    jr["extra"] = std::move(extra);
    rules[to_string(type)] = std::move(jr);
  }
  j["rules"] = std::move(rules);
  return j.dump(2) + "\n";
}

TeacherSupervision oracle_supervise(const Example& example) {
  if (!example.provenance) {
    raise(ErrorCode::MissingProvenance,
          "example '" + example.id + "' has no injected-edit record");
  }
  const InjectedEdit& edit = example.provenance->edit;
  const TeacherRule& rule = teacher_rules().rules[static_cast<std::size_t>(example.gold_fix_type)];

  std::vector<ReasoningTag> tags = rule.base;
  for (const auto& [when, tag] : rule.extra) {
    if (eval_predicate(when, edit)) tags.push_back(tag);
  }
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());

  TeacherSupervision sup;
  sup.fix_type = example.gold_fix_type;
  sup.trace.tags = std::move(tags);
  sup.source = SupervisionSource::Oracle;
  sup.valid = true;
  return sup;
}

std::size_t FilterReport::rejected_total() const {
  std::size_t sum = 0;
  for (std::size_t n : rejected) sum += n;
  return sum;
}

std::string FilterReport::to_json() const {
  Json j;
  j["total"] = total;
  j["retained"] = retained;
  Json jr;
  for (std::size_t r = 0; r < kNumRejectReasons; ++r) {
    jr[to_string(static_cast<RejectReason>(r))] = rejected[r];
  }
  j["rejected"] = std::move(jr);
  return j.dump();
}

std::pair<Dataset, FilterReport> supervise_dataset(const Dataset& dataset, TeacherMode mode,
                                                   const TeacherEndpointConfig* config) {
  FilterReport report;
  report.total = dataset.examples.size();

  Dataset out;
  out.seed = dataset.seed;
  out.split_ratio = dataset.split_ratio;

  if (mode == TeacherMode::Oracle) {
    out.examples = dataset.examples;
    for (Example& ex : out.examples) {
      ex.supervision = oracle_supervise(ex);
    }
    report.retained = out.examples.size();
    return {std::move(out), report};
  }

  if (config == nullptr) {
    raise(ErrorCode::ConfigError, "endpoint teacher mode needs an endpoint config");
  }
  std::vector<LlmSuperviseResult> results(dataset.examples.size());
  std::size_t workers = std::max<std::size_t>(1, config->concurrency);
  if (workers <= 1) {
    for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
      results[i] = llm_supervise(dataset.examples[i], *config);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= dataset.examples.size()) return;
        try {
          results[i] = llm_supervise(dataset.examples[i], *config);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    if (results[i].supervision.valid) {
      Example ex = dataset.examples[i];
      ex.supervision = results[i].supervision;
      out.examples.push_back(std::move(ex));
      ++report.retained;
    } else {
      RejectReason reason = results[i].reason.value_or(RejectReason::ParseError);
      ++report.rejected[static_cast<std::size_t>(reason)];
    }
  }
  return {std::move(out), report};
}

} // namespace fixlab
