#include "fixlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fixlab/error.hpp"
#include "fixlab/rng.hpp"
#include "ctoken.hpp"

namespace fixlab {

namespace {

using detail::CToken;
using detail::CTokenKind;
using detail::scan_c_tokens;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

} // namespace

const char* to_string(Split split) {
  switch (split) {
    case Split::Unassigned: return "unassigned";
    case Split::Train: return "train";
    case Split::Validation: return "validation";
  }
  return "unassigned";
}

std::vector<const Example*> Dataset::split_view(Split split) const {
  std::vector<const Example*> out;
  for (const Example& ex : examples) {
    if (ex.split == split) out.push_back(&ex);
  }
  return out;
}

// --- template markup -------------------------------------------------------

ProgramTemplate ProgramTemplate::parse(std::string id, std::string markup,
                                       std::vector<RenamePool> rename_pools,
                                       std::vector<TemplateTestCase> tests) {
  ProgramTemplate tmpl;
  tmpl.id_ = std::move(id);
  tmpl.markup_ = std::move(markup);
  tmpl.rename_pools_ = std::move(rename_pools);
  tmpl.tests_ = std::move(tests);

  auto fail = [&](const std::string& why) {
    raise(ErrorCode::FormatError, "template '" + tmpl.id_ + "': " + why);
  };
  for (const RenamePool& pool : tmpl.rename_pools_) {
    if (pool.second.empty()) fail("rename pool '" + pool.first + "' is empty");
  }
  auto pool_index = [&](const std::string& name) {
    for (std::size_t p = 0; p < tmpl.rename_pools_.size(); ++p) {
      if (tmpl.rename_pools_[p].first == name) return static_cast<int>(p);
    }
    return -1;
  };

  const std::string& text = tmpl.markup_;
  std::string pending;
  int cur_site = -1;
  auto flush = [&]() {
    if (!pending.empty()) {
      tmpl.segments_.push_back({Segment::Kind::Text, pending, cur_site});
      pending.clear();
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "{{") == 0) {
      if (cur_site != -1) fail("nested edit site");
      flush();
      std::size_t hash = text.find('#', i + 2);
      std::size_t colon = text.find(':', i + 2);
      if (hash == std::string::npos || colon == std::string::npos || hash > colon) {
        fail("malformed site header");
      }
      std::string kind_name = text.substr(i + 2, hash - i - 2);
      std::string site_id = text.substr(hash + 1, colon - hash - 1);
      auto kind = site_kind_from_string(kind_name);
      if (!kind) fail("unknown site kind '" + kind_name + "'");
      if (site_id.empty()) fail("empty site id");
      for (const EditSite& s : tmpl.sites_) {
        if (s.id == site_id) fail("duplicate site id '" + site_id + "'");
      }
      cur_site = static_cast<int>(tmpl.sites_.size());
      tmpl.sites_.push_back({site_id, *kind});
      i = colon + 1;
      continue;
    }
    if (text.compare(i, 2, "}}") == 0) {
      if (cur_site == -1) fail("'}}' outside an edit site");
      flush();
      cur_site = -1;
      i += 2;
      continue;
    }
    if (text[i] == '$') {
      flush();
      std::size_t end = text.find('$', i + 1);
      if (end == std::string::npos || end == i + 1) fail("malformed $name$ marker");
      std::string name = text.substr(i + 1, end - i - 1);
      if (pool_index(name) < 0) fail("identifier '" + name + "' has no rename pool");
      tmpl.segments_.push_back({Segment::Kind::Ident, name, cur_site});
      i = end + 1;
      continue;
    }
    pending.push_back(text[i]);
    ++i;
  }
  if (cur_site != -1) fail("unterminated edit site");
  flush();
  if (tmpl.sites_.empty()) fail("template declares no edit sites");

  std::vector<std::size_t> defaults(tmpl.rename_pools_.size(), 0);
  tmpl.default_source_ = tmpl.render(defaults).source;
  return tmpl;
}

ProgramTemplate::Rendering ProgramTemplate::render(const std::vector<std::size_t>& name_choices) const {
  if (name_choices.size() != rename_pools_.size()) {
    raise(ErrorCode::ConfigError, "template '" + id_ + "': expected " +
                                      std::to_string(rename_pools_.size()) + " name choices");
  }
  Rendering out;
  out.site_spans.assign(sites_.size(), {0, 0});
  std::vector<bool> seen(sites_.size(), false);
  for (const Segment& seg : segments_) {
    std::size_t start = out.source.size();
    if (seg.kind == Segment::Kind::Text) {
      out.source += seg.value;
    } else {
      int p = -1;
      for (std::size_t k = 0; k < rename_pools_.size(); ++k) {
        if (rename_pools_[k].first == seg.value) p = static_cast<int>(k);
      }
      const auto& pool = rename_pools_[static_cast<std::size_t>(p)].second;
      std::size_t choice = name_choices[static_cast<std::size_t>(p)] % pool.size();
      out.source += pool[choice];
    }
    if (seg.site >= 0) {
      auto s = static_cast<std::size_t>(seg.site);
      if (!seen[s]) {
        out.site_spans[s].first = start;
        seen[s] = true;
      }
      out.site_spans[s].second = out.source.size() - out.site_spans[s].first;
    }
  }
  return out;
}

bool ProgramTemplate::operator==(const ProgramTemplate& other) const {
  return id_ == other.id_ && markup_ == other.markup_ && rename_pools_ == other.rename_pools_ &&
         tests_ == other.tests_;
}

// --- mutation tables -------------------------------------------------------

const MutationTables& mutation_tables() {
  static const MutationTables tables = {
      "1",
      {
          {"loop-bound",
           {
               {"<", {"<="}},
               {"<=", {"<"}},
               {">", {">="}},
               {">=", {">"}},
           }},
          {"comparison",
           {
               {"<", {"<=", ">"}},
               {"<=", {"<", ">="}},
               {">", {">=", "<"}},
               {">=", {">", "<="}},
               {"==", {"!="}},
               {"!=", {"=="}},
           }},
          {"binary-operator",
           {
               {"+", {"-", "*"}},
               {"-", {"+"}},
               {"*", {"+"}},
               {"/", {"*"}},
               {"%", {"/"}},
               {"+=", {"-="}},
               {"-=", {"+="}},
               {"*=", {"+="}},
           }},
      },
  };
  return tables;
}

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>* token_map_for(SiteKind kind) {
  const char* name = to_string(kind);
  for (const auto& entry : mutation_tables().token_maps) {
    if (entry.first == name) return &entry.second;
  }
  return nullptr;
}

std::vector<MutationOption> token_map_options(SiteKind kind, const std::string& span) {
  std::vector<MutationOption> out;
  const auto* map = token_map_for(kind);
  if (map == nullptr) return out;
  for (const CToken& tok : scan_c_tokens(span)) {
    for (const auto& [from, to_list] : *map) {
      if (tok.text != from) continue;
      for (const std::string& to : to_list) {
        std::string after = span.substr(0, tok.offset) + to + span.substr(tok.offset + from.size());
        out.push_back({from + "=>" + to, after});
      }
      return out; // first mappable token wins
    }
  }
  return out;
}

long long parse_int(const std::string& text, bool* ok) {
  *ok = !text.empty() && text.find_first_not_of("0123456789") == std::string::npos &&
        text.size() <= 18;
  return *ok ? std::stoll(text) : 0;
}

} // namespace

std::vector<MutationOption> mutation_options(SiteKind kind, const std::string& span) {
  switch (kind) {
    case SiteKind::LoopBound: {
      // comparator flips from the token map, plus off-by-one bound rewrites
      std::vector<MutationOption> out = token_map_options(kind, span);
      auto toks = scan_c_tokens(span);
      if (!toks.empty() && (toks.back().kind == CTokenKind::Identifier ||
                            toks.back().kind == CTokenKind::Number)) {
        out.push_back({"bound-minus-one", span + " - 1"});
        out.push_back({"bound-plus-one", span + " + 1"});
      }
      return out;
    }
    case SiteKind::Comparison:
    case SiteKind::BinaryOperator:
      return token_map_options(kind, span);
    case SiteKind::Initialization: {
      auto toks = scan_c_tokens(span);
      if (toks.size() != 3 || toks[0].kind != CTokenKind::Identifier || toks[1].text != "=" ||
          toks[2].kind != CTokenKind::Number) {
        return {};
      }
      bool ok = false;
      long long value = parse_int(toks[2].text, &ok);
      if (!ok) return {};
      return {
          {"drop-init", toks[0].text},
          {"re-init", toks[0].text + (value == 0 ? " = 1" : " = 0")},
      };
    }
    case SiteKind::SwitchCase:
      if (trim(span).empty()) return {};
      return {{"drop-case", ""}};
    case SiteKind::ArrayIndex: {
      std::string expr = trim(span);
      if (expr.empty()) return {};
      return {
          {"plus-one", expr + " + 1"},
          {"minus-one", expr + " - 1"},
      };
    }
    case SiteKind::ReturnExpr: {
      std::string expr = trim(span);
      if (expr.empty()) return {};
      std::vector<MutationOption> out;
      if (expr == "0") {
        out.push_back({"to-one", "1"});
      } else {
        out.push_back({"to-zero", "0"});
      }
      out.push_back({"plus-one", expr + " + 1"});
      return out;
    }
    case SiteKind::IoFormat: {
      auto toks = scan_c_tokens(span);
      if (toks.size() != 1 || toks[0].kind != CTokenKind::String || span.size() < 2) return {};
      std::string content = span.substr(1, span.size() - 2);
      std::vector<MutationOption> out;
      bool ends_newline = content.size() >= 2 && content.compare(content.size() - 2, 2, "\\n") == 0;
      if (ends_newline) {
        out.push_back({"strip-newline", "\"" + content.substr(0, content.size() - 2) + "\""});
        out.push_back({"trailing-space", "\"" + content.substr(0, content.size() - 2) + " \\n\""});
      } else {
        out.push_back({"add-newline", "\"" + content + "\\n\""});
        out.push_back({"trailing-space", "\"" + content + " \""});
      }
      return out;
    }
    case SiteKind::Constant: {
      auto toks = scan_c_tokens(span);
      if (toks.size() != 1 || toks[0].kind != CTokenKind::Number) return {};
      bool ok = false;
      long long value = parse_int(toks[0].text, &ok);
      if (!ok) return {};
      std::vector<MutationOption> out;
      out.push_back({"plus-one", std::to_string(value + 1)});
      out.push_back({"minus-one", std::to_string(value - 1)});
      if (value != 0) out.push_back({"to-zero", "0"});
      return out;
    }
  }
  return {};
}

// --- injection -------------------------------------------------------------

namespace {

// Coarse symptom a failing test would show for this edit. Families of edits
// that corrupt results the same way share wording on purpose; the mutation
// shape (not the hidden fix type) decides which family an example lands in.
std::string behavior_descriptor(FixType type, const std::string& before,
                                const std::string& after) {
  auto first_cmp = [](const std::string& text) -> std::string {
    static const std::vector<std::string> cmps = {"<", "<=", ">", ">=", "==", "!="};
    for (const CToken& tok : scan_c_tokens(text)) {
      if (std::find(cmps.begin(), cmps.end(), tok.text) != cmps.end()) return tok.text;
    }
    return "";
  };
  auto is_reversal = [](const std::string& a, const std::string& b) {
    static const std::vector<std::pair<std::string, std::string>> pairs = {
        {"<", ">"}, {">", "<"}, {"<=", ">="}, {">=", "<="}, {"==", "!="}, {"!=", "=="},
    };
    return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
  };
  switch (type) {
    case FixType::WRONG_CONDITION:
      if (is_reversal(first_cmp(before), first_cmp(after))) {
        return "wrong branch taken for this input";
      }
      return "wrong result at a boundary input";
    case FixType::MISSING_CASE:
      return "wrong branch taken for this input";
    case FixType::LOOP_BOUND:
      return "wrong result at a boundary input";
    case FixType::WRONG_OPERATOR:
      return "computed value differs from the expected output";
    case FixType::WRONG_CONSTANT:
      if (after == "0") return "computed value differs from the expected output";
      return "computed value is off by a small amount";
    case FixType::INIT_ERROR:
      if (after.find('=') == std::string::npos) return "result depends on an uninitialized value";
      return "computed value is off by a small amount";
    case FixType::OFF_BY_ONE_INDEX:
      return "a neighboring element of the array is used";
    case FixType::WRONG_RETURN: {
      auto toks = scan_c_tokens(after);
      if (toks.size() == 1 && toks[0].kind == CTokenKind::Number) {
        return "function always returns the same value";
      }
      return "computed value differs from the expected output";
    }
    case FixType::IO_FORMAT: {
      auto spaces = [](const std::string& s) { return std::count(s.begin(), s.end(), ' '); };
      if (spaces(after) > spaces(before)) return "unexpected whitespace in the output";
      if (after.find("\\n") == std::string::npos) return "line break missing from the output";
      return "unexpected line break in the output";
    }
  }
  return "computed value differs from the expected output";
}

bool template_covers(const ProgramTemplate& tmpl, FixType type) {
  SiteKind kind = site_kind_for_fix(type);
  std::vector<std::size_t> defaults(tmpl.rename_pools().size(), 0);
  ProgramTemplate::Rendering r = tmpl.render(defaults);
  for (std::size_t s = 0; s < tmpl.edit_sites().size(); ++s) {
    if (tmpl.edit_sites()[s].kind != kind) continue;
    std::string span = r.source.substr(r.site_spans[s].first, r.site_spans[s].second);
    if (!mutation_options(kind, span).empty()) return true;
  }
  return false;
}

} // namespace

Example inject_bug(const ProgramTemplate& tmpl, FixType type, std::uint64_t seed) {
  SeededRng rng(seed);
  std::vector<std::size_t> choices;
  choices.reserve(tmpl.rename_pools().size());
  for (const auto& pool : tmpl.rename_pools()) {
    choices.push_back(rng.below(pool.second.size()));
  }
  ProgramTemplate::Rendering r = tmpl.render(choices);

  SiteKind kind = site_kind_for_fix(type);
  struct Candidate {
    std::size_t site;
    std::string span;
    std::vector<MutationOption> options;
  };
  std::vector<Candidate> candidates;
  for (std::size_t s = 0; s < tmpl.edit_sites().size(); ++s) {
    if (tmpl.edit_sites()[s].kind != kind) continue;
    std::string span = r.source.substr(r.site_spans[s].first, r.site_spans[s].second);
    auto options = mutation_options(kind, span);
    if (!options.empty()) candidates.push_back({s, span, std::move(options)});
  }
  if (candidates.empty()) {
    raise(ErrorCode::NoEditSite, "template '" + tmpl.id() + "' has no mutable " +
                                     std::string(to_string(kind)) + " site for " + to_string(type));
  }
  const Candidate& picked = candidates[rng.below(candidates.size())];
  const MutationOption& option = picked.options[rng.below(picked.options.size())];
  const auto [offset, length] = r.site_spans[picked.site];

  Example ex;
  ex.id = tmpl.id() + "-" + to_string(type) + "-s" + std::to_string(seed);
  ex.reference_source = r.source;
  ex.buggy_source = r.source.substr(0, offset) + option.after + r.source.substr(offset + length);
  std::string symptom = behavior_descriptor(type, picked.span, option.after);
  for (const TemplateTestCase& test : tmpl.tests()) {
    ex.failing_behavior.push_back({test.input, test.expected_output, symptom});
  }
  ex.gold_fix_type = type;
  ex.provenance = Provenance{
      tmpl.id(),
      {tmpl.edit_sites()[picked.site].id, kind, offset, picked.span, option.after},
  };
  return ex;
}

Dataset generate_corpus(const std::vector<ProgramTemplate>& templates, std::size_t count_per_class,
                        std::uint64_t seed) {
  Dataset ds;
  ds.seed = seed;
  std::uint64_t global_index = 0;
  for (FixType type : all_fix_types()) {
    std::vector<const ProgramTemplate*> compatible;
    for (const ProgramTemplate& tmpl : templates) {
      if (template_covers(tmpl, type)) compatible.push_back(&tmpl);
    }
    if (compatible.empty()) {
      raise(ErrorCode::CoverageGap, std::string("no template covers fix type ") + to_string(type));
    }
    for (std::size_t k = 0; k < count_per_class; ++k, ++global_index) {
      const ProgramTemplate& tmpl = *compatible[k % compatible.size()];
      Example ex = inject_bug(tmpl, type, seed ^ global_index);
      char buf[16];
      std::snprintf(buf, sizeof(buf), "ex%04llu", static_cast<unsigned long long>(global_index));
      ex.id = std::string(buf) + "-" + to_string(type);
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

// --- stratified split ------------------------------------------------------

Dataset stratified_split(Dataset dataset, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    raise(ErrorCode::ConfigError, "split ratio must lie in (0, 1)");
  }
  dataset.seed = seed;
  dataset.split_ratio = ratio;
  if (dataset.examples.empty()) return dataset;

  std::vector<std::vector<std::size_t>> members(kNumFixTypes);
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    members[static_cast<std::size_t>(dataset.examples[i].gold_fix_type)].push_back(i);
  }
  std::vector<std::size_t> present;
  for (std::size_t c = 0; c < kNumFixTypes; ++c) {
    if (members[c].empty()) continue;
    if (members[c].size() < 2) {
      raise(ErrorCode::ClassTooSmall,
            std::string("class ") + to_string(static_cast<FixType>(c)) + " has " +
                std::to_string(members[c].size()) + " example(s); need at least 2");
    }
    present.push_back(c);
  }

  const double val_frac = 1.0 - ratio;
  const auto total = static_cast<double>(dataset.examples.size());
  auto val_total = static_cast<std::size_t>(std::floor(total * val_frac + 0.5));

  std::vector<std::size_t> quota(kNumFixTypes, 0);
  std::vector<double> remainder(kNumFixTypes, 0.0);
  std::size_t assigned = 0;
  for (std::size_t c : present) {
    double exact = static_cast<double>(members[c].size()) * val_frac;
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
    assigned += quota[c];
  }

  SeededRng rng(seed);
  std::vector<std::size_t> priority = rng.permutation(present.size());
  std::vector<std::size_t> order(present.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[present[a]] != remainder[present[b]]) {
      return remainder[present[a]] > remainder[present[b]];
    }
    return priority[a] < priority[b];
  });
  std::size_t extras = val_total > assigned ? val_total - assigned : 0;
  while (extras > 0) {
    bool progressed = false;
    for (std::size_t k : order) {
      if (extras == 0) break;
      std::size_t c = present[k];
      if (quota[c] < members[c].size()) {
        ++quota[c];
        --extras;
        progressed = true;
      }
    }
    if (!progressed) break; // every class saturated; give up on the exact total
  }

  for (std::size_t c : present) {
    std::vector<std::size_t> shuffled = rng.permutation(members[c].size());
    for (std::size_t k = 0; k < members[c].size(); ++k) {
      Example& ex = dataset.examples[members[c][shuffled[k]]];
      ex.split = k < quota[c] ? Split::Validation : Split::Train;
    }
  }
  return dataset;
}

} // namespace fixlab
