#include "fixlab/taxonomy.hpp"

#include <algorithm>

namespace fixlab {

const std::array<FixType, kNumFixTypes>& all_fix_types() {
  static const std::array<FixType, kNumFixTypes> types = {
      FixType::WRONG_CONDITION, FixType::LOOP_BOUND,    FixType::WRONG_OPERATOR,
      FixType::INIT_ERROR,      FixType::MISSING_CASE,  FixType::OFF_BY_ONE_INDEX,
      FixType::WRONG_RETURN,    FixType::IO_FORMAT,     FixType::WRONG_CONSTANT,
  };
  return types;
}

const char* to_string(FixType type) {
  switch (type) {
    case FixType::WRONG_CONDITION: return "WRONG_CONDITION";
    case FixType::LOOP_BOUND: return "LOOP_BOUND";
    case FixType::WRONG_OPERATOR: return "WRONG_OPERATOR";
    case FixType::INIT_ERROR: return "INIT_ERROR";
    case FixType::MISSING_CASE: return "MISSING_CASE";
    case FixType::OFF_BY_ONE_INDEX: return "OFF_BY_ONE_INDEX";
    case FixType::WRONG_RETURN: return "WRONG_RETURN";
    case FixType::IO_FORMAT: return "IO_FORMAT";
    case FixType::WRONG_CONSTANT: return "WRONG_CONSTANT";
  }
  return "UNKNOWN";
}

std::optional<FixType> fix_type_from_string(std::string_view name) {
  for (FixType type : all_fix_types()) {
    if (name == to_string(type)) return type;
  }
  return std::nullopt;
}

const char* to_string(SiteKind kind) {
  switch (kind) {
    case SiteKind::Comparison: return "comparison";
    case SiteKind::LoopBound: return "loop-bound";
    case SiteKind::BinaryOperator: return "binary-operator";
    case SiteKind::Initialization: return "initialization";
    case SiteKind::SwitchCase: return "switch-case";
    case SiteKind::ArrayIndex: return "array-index";
    case SiteKind::ReturnExpr: return "return-expr";
    case SiteKind::IoFormat: return "io-format";
    case SiteKind::Constant: return "constant";
  }
  return "unknown";
}

std::optional<SiteKind> site_kind_from_string(std::string_view name) {
  static const std::array<SiteKind, kNumSiteKinds> kinds = {
      SiteKind::Comparison,     SiteKind::LoopBound,  SiteKind::BinaryOperator,
      SiteKind::Initialization, SiteKind::SwitchCase, SiteKind::ArrayIndex,
      SiteKind::ReturnExpr,     SiteKind::IoFormat,   SiteKind::Constant,
  };
  for (SiteKind kind : kinds) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

SiteKind site_kind_for_fix(FixType type) {
  switch (type) {
    case FixType::WRONG_CONDITION: return SiteKind::Comparison;
    case FixType::LOOP_BOUND: return SiteKind::LoopBound;
    case FixType::WRONG_OPERATOR: return SiteKind::BinaryOperator;
    case FixType::INIT_ERROR: return SiteKind::Initialization;
    case FixType::MISSING_CASE: return SiteKind::SwitchCase;
    case FixType::OFF_BY_ONE_INDEX: return SiteKind::ArrayIndex;
    case FixType::WRONG_RETURN: return SiteKind::ReturnExpr;
    case FixType::IO_FORMAT: return SiteKind::IoFormat;
    case FixType::WRONG_CONSTANT: return SiteKind::Constant;
  }
  return SiteKind::Comparison;
}

FixType fix_type_for_site(SiteKind kind) {
  switch (kind) {
    case SiteKind::Comparison: return FixType::WRONG_CONDITION;
    case SiteKind::LoopBound: return FixType::LOOP_BOUND;
    case SiteKind::BinaryOperator: return FixType::WRONG_OPERATOR;
    case SiteKind::Initialization: return FixType::INIT_ERROR;
    case SiteKind::SwitchCase: return FixType::MISSING_CASE;
    case SiteKind::ArrayIndex: return FixType::OFF_BY_ONE_INDEX;
    case SiteKind::ReturnExpr: return FixType::WRONG_RETURN;
    case SiteKind::IoFormat: return FixType::IO_FORMAT;
    case SiteKind::Constant: return FixType::WRONG_CONSTANT;
  }
  return FixType::WRONG_CONDITION;
}

const std::array<ReasoningTag, kNumReasoningTags>& all_reasoning_tags() {
  static const std::array<ReasoningTag, kNumReasoningTags> tags = {
      ReasoningTag::LOOP_BOUND_ERROR, ReasoningTag::CMP_ERROR,
      ReasoningTag::MISSING_BRANCH,   ReasoningTag::INDEX_ERROR,
      ReasoningTag::RETURN_ERROR,     ReasoningTag::IO_ERROR,
      ReasoningTag::INIT_UNSET,       ReasoningTag::OP_SUBSTITUTION,
      ReasoningTag::CONST_ERROR,
  };
  return tags;
}

const char* to_string(ReasoningTag tag) {
  switch (tag) {
    case ReasoningTag::LOOP_BOUND_ERROR: return "LOOP_BOUND_ERROR";
    case ReasoningTag::CMP_ERROR: return "CMP_ERROR";
    case ReasoningTag::MISSING_BRANCH: return "MISSING_BRANCH";
    case ReasoningTag::INDEX_ERROR: return "INDEX_ERROR";
    case ReasoningTag::RETURN_ERROR: return "RETURN_ERROR";
    case ReasoningTag::IO_ERROR: return "IO_ERROR";
    case ReasoningTag::INIT_UNSET: return "INIT_UNSET";
    case ReasoningTag::OP_SUBSTITUTION: return "OP_SUBSTITUTION";
    case ReasoningTag::CONST_ERROR: return "CONST_ERROR";
  }
  return "UNKNOWN";
}

std::optional<ReasoningTag> reasoning_tag_from_string(std::string_view name) {
  for (ReasoningTag tag : all_reasoning_tags()) {
    if (name == to_string(tag)) return tag;
  }
  return std::nullopt;
}

bool ReasoningTrace::contains(ReasoningTag tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const char* to_string(SupervisionSource source) {
  return source == SupervisionSource::Oracle ? "oracle" : "llm";
}

std::optional<SupervisionSource> supervision_source_from_string(std::string_view name) {
  if (name == "oracle") return SupervisionSource::Oracle;
  if (name == "llm") return SupervisionSource::Llm;
  return std::nullopt;
}

} // namespace fixlab
