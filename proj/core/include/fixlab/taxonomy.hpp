#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fixlab {

/// Closed set of bug categories. The enum order is the class index used by
/// the fix head, metrics, and serialized names alike.
enum class FixType {
  WRONG_CONDITION = 0,
  LOOP_BOUND,
  WRONG_OPERATOR,
  INIT_ERROR,
  MISSING_CASE,
  OFF_BY_ONE_INDEX,
  WRONG_RETURN,
  IO_FORMAT,
  WRONG_CONSTANT,
};

inline constexpr std::size_t kNumFixTypes = 9;

const std::array<FixType, kNumFixTypes>& all_fix_types();
const char* to_string(FixType type);
std::optional<FixType> fix_type_from_string(std::string_view name);

/// Kinds of mutable locations a template can declare.
enum class SiteKind {
  Comparison = 0,
  LoopBound,
  BinaryOperator,
  Initialization,
  SwitchCase,
  ArrayIndex,
  ReturnExpr,
  IoFormat,
  Constant,
};

inline constexpr std::size_t kNumSiteKinds = 9;

const char* to_string(SiteKind kind);
std::optional<SiteKind> site_kind_from_string(std::string_view name);

/// Each fix type is injected at exactly one kind of site.
SiteKind site_kind_for_fix(FixType type);
FixType fix_type_for_site(SiteKind kind);

/// Closed vocabulary of symbolic reasoning tags. The enum order is the
/// canonical trace order: every rule-generated trace and every decoded
/// trace lists its tags in ascending enum order.
enum class ReasoningTag {
  LOOP_BOUND_ERROR = 0,
  CMP_ERROR,
  MISSING_BRANCH,
  INDEX_ERROR,
  RETURN_ERROR,
  IO_ERROR,
  INIT_UNSET,
  OP_SUBSTITUTION,
  CONST_ERROR,
};

inline constexpr std::size_t kNumReasoningTags = 9;
inline constexpr std::size_t kMaxTraceLength = 4;

const std::array<ReasoningTag, kNumReasoningTags>& all_reasoning_tags();
const char* to_string(ReasoningTag tag);
std::optional<ReasoningTag> reasoning_tag_from_string(std::string_view name);

/// Ordered, duplicate-free list of tags attached to one example.
struct ReasoningTrace {
  std::vector<ReasoningTag> tags;

  bool operator==(const ReasoningTrace&) const = default;
  bool contains(ReasoningTag tag) const;
};

enum class SupervisionSource { Oracle, Llm };

const char* to_string(SupervisionSource source);
std::optional<SupervisionSource> supervision_source_from_string(std::string_view name);

struct TeacherSupervision {
  FixType fix_type = FixType::WRONG_CONDITION;
  ReasoningTrace trace;
  SupervisionSource source = SupervisionSource::Oracle;
  bool valid = false;

  bool operator==(const TeacherSupervision&) const = default;
};

} // namespace fixlab
