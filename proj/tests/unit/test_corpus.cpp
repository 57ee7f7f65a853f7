#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>
#include <fixlab/corpus.hpp>
#include <fixlab/error.hpp>
#include <fixlab/rng.hpp>

#include "tmpdir.hpp"

using namespace fixlab;

namespace {

ProgramTemplate tiny_template() {
  return ProgramTemplate::parse("tiny",
                                "int main(void) {\n"
                                "    int $x$ = 0;\n"
                                "    if ($x$ {{comparison#cmp:<}} 10) { $x$ = 1; }\n"
                                "    return {{return-expr#out:$x$}};\n"
                                "}\n",
                                {{"x", {"x", "y"}}}, {{"", "1\n"}});
}

ErrorCode parse_failure(const std::string& markup) {
  try {
    ProgramTemplate::parse("bad", markup, {{"x", {"x"}}}, {});
    return ErrorCode::ConfigError; // placeholder meaning "did not throw"
  } catch (const Error& e) {
    return e.code();
  }
}

} // namespace

TEST_CASE("template markup parses into sites and renders with spans") {
  ProgramTemplate tmpl = tiny_template();
  REQUIRE(tmpl.edit_sites().size() == 2);
  CHECK(tmpl.edit_sites()[0].id == "cmp");
  CHECK(tmpl.edit_sites()[0].kind == SiteKind::Comparison);
  CHECK(tmpl.edit_sites()[1].id == "out");
  CHECK(tmpl.edit_sites()[1].kind == SiteKind::ReturnExpr);

  ProgramTemplate::Rendering r = tmpl.render({0});
  CHECK(r.source.find("{{") == std::string::npos);
  CHECK(r.source.find("$") == std::string::npos);
  REQUIRE(r.site_spans.size() == 2);
  CHECK(r.source.substr(r.site_spans[0].first, r.site_spans[0].second) == "<");
  CHECK(r.source.substr(r.site_spans[1].first, r.site_spans[1].second) == "x");

  // Second pool entry renames every $x$ occurrence, including inside sites.
  ProgramTemplate::Rendering renamed = tmpl.render({1});
  CHECK(renamed.source.find("int y = 0;") != std::string::npos);
  CHECK(renamed.source.find("$") == std::string::npos);
  CHECK(renamed.source.substr(renamed.site_spans[1].first, renamed.site_spans[1].second) == "y");

  CHECK(tmpl.source() == tmpl.render({0}).source);
}

TEST_CASE("template markup rejects malformed input with format errors") {
  CHECK(parse_failure("no sites at all $x$\n") == ErrorCode::FormatError);
  CHECK(parse_failure("{{comparison#a:<}} and {{comparison#a:<}}") == ErrorCode::FormatError);
  CHECK(parse_failure("{{comparison#a:< {{comparison#b:>}} }}") == ErrorCode::FormatError);
  CHECK(parse_failure("{{comparison#a:<") == ErrorCode::FormatError);
  CHECK(parse_failure("}} stray close") == ErrorCode::FormatError);
  CHECK(parse_failure("{{mystery#a:<}}") == ErrorCode::FormatError);
  CHECK(parse_failure("{{comparison#:<}}") == ErrorCode::FormatError);
  CHECK(parse_failure("{{comparison a <}}") == ErrorCode::FormatError);
  CHECK(parse_failure("$unpooled$ {{comparison#a:<}}") == ErrorCode::FormatError);
  CHECK(parse_failure("$x {{comparison#a:<}}") == ErrorCode::FormatError);

  try {
    ProgramTemplate::parse("bad", "{{comparison#a:<}}", {{"x", {}}}, {});
    FAIL("empty rename pool must be rejected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
  }
}

TEST_CASE("render demands one choice per pool") {
  ProgramTemplate tmpl = tiny_template();
  try {
    tmpl.render({});
    FAIL("expected a config error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
  }
}

TEST_CASE("builtin templates are plausible C programs covering every site kind") {
  const std::vector<ProgramTemplate>& templates = builtin_templates();
  CHECK(templates.size() >= 8);

  std::set<std::string> ids;
  std::set<SiteKind> kinds;
  for (const ProgramTemplate& tmpl : templates) {
    ids.insert(tmpl.id());
    CHECK_FALSE(tmpl.edit_sites().empty());
    CHECK_FALSE(tmpl.tests().empty());
    std::set<SiteKind> own;
    for (const EditSite& site : tmpl.edit_sites()) {
      kinds.insert(site.kind);
      own.insert(site.kind);
    }
    CHECK(own.size() >= 2);

    std::string source = tmpl.source();
    std::size_t lines = static_cast<std::size_t>(std::count(source.begin(), source.end(), '\n'));
    CHECK(lines >= 8);
    CHECK(lines <= 60);
    CHECK(source.find("#include <stdio.h>") != std::string::npos);
    CHECK(source.find("int main(void)") != std::string::npos);
  }
  CHECK(ids.size() == templates.size());
  CHECK(kinds.size() == 9); // every fix type reachable somewhere
}

TEST_CASE("mutation options per site kind") {
  auto afters = [](SiteKind kind, const std::string& span) {
    std::vector<std::string> out;
    for (const MutationOption& opt : mutation_options(kind, span)) out.push_back(opt.after);
    return out;
  };

  CHECK(afters(SiteKind::Comparison, "<") == std::vector<std::string>{"<=", ">"});
  CHECK(afters(SiteKind::Comparison, "==") == std::vector<std::string>{"!="});
  CHECK(afters(SiteKind::LoopBound, "< n") ==
        std::vector<std::string>{"<= n", "< n - 1", "< n + 1"});
  CHECK(afters(SiteKind::LoopBound, ">= 10") ==
        std::vector<std::string>{"> 10", ">= 10 - 1", ">= 10 + 1"});
  CHECK(afters(SiteKind::LoopBound, "<") == std::vector<std::string>{"<="}); // no bound to rewrite
  CHECK(afters(SiteKind::BinaryOperator, "a + b") ==
        std::vector<std::string>{"a - b", "a * b"});
  CHECK(afters(SiteKind::Initialization, "sum = 0") ==
        std::vector<std::string>{"sum", "sum = 1"});
  CHECK(afters(SiteKind::Initialization, "width = 1") ==
        std::vector<std::string>{"width", "width = 0"});
  CHECK(afters(SiteKind::SwitchCase, "case 6:\n    break;") == std::vector<std::string>{""});
  CHECK(afters(SiteKind::ArrayIndex, "i") == std::vector<std::string>{"i + 1", "i - 1"});
  CHECK(afters(SiteKind::ReturnExpr, "0") == std::vector<std::string>{"1", "0 + 1"});
  CHECK(afters(SiteKind::ReturnExpr, "best") == std::vector<std::string>{"0", "best + 1"});
  CHECK(afters(SiteKind::IoFormat, "\"%d\\n\"") ==
        std::vector<std::string>{"\"%d\"", "\"%d \\n\""});
  CHECK(afters(SiteKind::IoFormat, "\"%d \"") ==
        std::vector<std::string>{"\"%d \\n\"", "\"%d  \""});
  CHECK(afters(SiteKind::Constant, "10") == std::vector<std::string>{"11", "9", "0"});
  CHECK(afters(SiteKind::Constant, "0") == std::vector<std::string>{"1", "-1"});

  // Spans the mutation tables cannot touch yield nothing.
  CHECK(mutation_options(SiteKind::Comparison, "x + y").empty());
  CHECK(mutation_options(SiteKind::Initialization, "sum").empty());
  CHECK(mutation_options(SiteKind::Constant, "x").empty());
  CHECK(mutation_options(SiteKind::IoFormat, "plain").empty());
  CHECK(mutation_options(SiteKind::SwitchCase, "  ").empty());

  // No option reproduces its own span: a mutation always changes the text.
  for (SiteKind kind :
       {SiteKind::Comparison, SiteKind::LoopBound, SiteKind::BinaryOperator,
        SiteKind::Initialization, SiteKind::SwitchCase, SiteKind::ArrayIndex, SiteKind::ReturnExpr,
        SiteKind::IoFormat, SiteKind::Constant}) {
    for (const std::string& span : {std::string("<"), std::string("x = 3"), std::string("7"),
                                    std::string("\"%d\\n\""), std::string("a + b")}) {
      for (const MutationOption& opt : mutation_options(kind, span)) {
        CHECK(opt.after != span);
        CHECK_FALSE(opt.name.empty());
      }
    }
  }
}

TEST_CASE("mutation tables serialize to versioned JSON") {
  const MutationTables& tables = mutation_tables();
  CHECK(tables.version == "1");
  std::set<std::string> kinds;
  for (const auto& [kind, entries] : tables.token_maps) {
    kinds.insert(kind);
    CHECK_FALSE(entries.empty());
  }
  CHECK(kinds == std::set<std::string>{"loop-bound", "comparison", "binary-operator"});

  std::string json = mutation_tables_to_json();
  CHECK(json.find("\"version\": \"1\"") != std::string::npos);
  CHECK(json.find("\"comparison\"") != std::string::npos);
  CHECK(json.back() == '\n');
}

TEST_CASE("inject_bug splices exactly one edit and records it") {
  const ProgramTemplate& tmpl = builtin_templates()[0];
  for (FixType type : {FixType::LOOP_BOUND, FixType::WRONG_CONSTANT, FixType::INIT_ERROR,
                       FixType::IO_FORMAT, FixType::WRONG_OPERATOR}) {
    for (std::uint64_t seed : {1ULL, 7ULL, 123456789ULL}) {
      Example ex = inject_bug(tmpl, type, seed);
      CHECK(ex.gold_fix_type == type);
      REQUIRE(ex.provenance.has_value());
      const InjectedEdit& edit = ex.provenance->edit;
      CHECK(ex.provenance->template_id == tmpl.id());
      CHECK(edit.site_kind == site_kind_for_fix(type));
      CHECK(edit.before != edit.after);
      CHECK(ex.buggy_source != ex.reference_source);

      // Splice identity: the buggy program is the reference with one span
      // replaced at the recorded offset.
      CHECK(ex.reference_source.substr(edit.offset, edit.before.size()) == edit.before);
      std::string rebuilt = ex.reference_source.substr(0, edit.offset) + edit.after +
                            ex.reference_source.substr(edit.offset + edit.before.size());
      CHECK(rebuilt == ex.buggy_source);

      CHECK_FALSE(ex.failing_behavior.empty());
      CHECK(ex.failing_behavior.size() == tmpl.tests().size());
      for (std::size_t t = 0; t < ex.failing_behavior.size(); ++t) {
        CHECK(ex.failing_behavior[t].input == tmpl.tests()[t].input);
        CHECK(ex.failing_behavior[t].expected_output == tmpl.tests()[t].expected_output);
        CHECK_FALSE(ex.failing_behavior[t].observed.empty());
      }
    }
  }
}

TEST_CASE("inject_bug is deterministic in the seed") {
  const ProgramTemplate& tmpl = builtin_templates()[1];
  Example a = inject_bug(tmpl, FixType::WRONG_CONDITION, 99);
  Example b = inject_bug(tmpl, FixType::WRONG_CONDITION, 99);
  CHECK(a == b);

  // Across many seeds at least two distinct buggy programs appear (the
  // template has several rename pools and mutation choices).
  std::set<std::string> variants;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    variants.insert(inject_bug(tmpl, FixType::WRONG_CONDITION, seed).buggy_source);
  }
  CHECK(variants.size() >= 2);
}

TEST_CASE("inject_bug draws names, site, and option in the documented order") {
  // Independent replay of the seeded choices: one below() per rename pool,
  // one over the mutable sites of the kind, one over that site's options.
  const ProgramTemplate& tmpl = builtin_templates()[1]; // several sites and pools
  for (FixType type : {FixType::WRONG_CONDITION, FixType::LOOP_BOUND, FixType::WRONG_RETURN}) {
    for (std::uint64_t seed : {3ULL, 17ULL, 2026ULL}) {
      SeededRng probe(seed);
      std::vector<std::size_t> choices;
      for (const auto& pool : tmpl.rename_pools()) {
        choices.push_back(probe.below(pool.second.size()));
      }
      ProgramTemplate::Rendering r = tmpl.render(choices);

      SiteKind kind = site_kind_for_fix(type);
      struct Cand {
        std::size_t site;
        std::vector<MutationOption> options;
      };
      std::vector<Cand> cands;
      for (std::size_t s = 0; s < tmpl.edit_sites().size(); ++s) {
        if (tmpl.edit_sites()[s].kind != kind) continue;
        std::string span = r.source.substr(r.site_spans[s].first, r.site_spans[s].second);
        auto options = mutation_options(kind, span);
        if (!options.empty()) cands.push_back({s, std::move(options)});
      }
      REQUIRE_FALSE(cands.empty());
      const Cand& cand = cands[probe.below(cands.size())];
      const MutationOption& opt = cand.options[probe.below(cand.options.size())];
      auto [offset, length] = r.site_spans[cand.site];
      std::string expected_buggy =
          r.source.substr(0, offset) + opt.after + r.source.substr(offset + length);

      Example ex = inject_bug(tmpl, type, seed);
      CHECK(ex.reference_source == r.source);
      CHECK(ex.buggy_source == expected_buggy);
      CHECK(ex.provenance->edit.site_id == tmpl.edit_sites()[cand.site].id);
    }
  }
}

TEST_CASE("inject_bug without a usable site reports NoEditSite") {
  ProgramTemplate tmpl = tiny_template(); // comparison + return-expr only
  try {
    inject_bug(tmpl, FixType::IO_FORMAT, 1);
    FAIL("expected NoEditSite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoEditSite);
  }
}

TEST_CASE("generate_corpus lays out class-major blocks with unique ids") {
  Dataset ds = generate_corpus(builtin_templates(), 32, 42);
  REQUIRE(ds.examples.size() == 288);
  CHECK(ds.seed == 42);

  std::set<std::string> ids;
  std::map<FixType, std::size_t> per_class;
  for (const Example& ex : ds.examples) {
    ids.insert(ex.id);
    ++per_class[ex.gold_fix_type];
    CHECK(ex.split == Split::Unassigned);
    REQUIRE(ex.provenance.has_value());
  }
  CHECK(ids.size() == 288);
  REQUIRE(per_class.size() == 9);
  for (const auto& [type, count] : per_class) CHECK(count == 32);

  // Class-major order following the canonical fix-type sequence.
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    CHECK(ds.examples[i].gold_fix_type == all_fix_types()[i / 32]);
  }

  Dataset again = generate_corpus(builtin_templates(), 32, 42);
  CHECK(ds == again);
  Dataset other = generate_corpus(builtin_templates(), 32, 43);
  CHECK_FALSE(ds == other);
}

TEST_CASE("generate_corpus supports one example per class") {
  Dataset ds = generate_corpus(builtin_templates(), 1, 7);
  CHECK(ds.examples.size() == 9);
}

TEST_CASE("generate_corpus refuses template sets that miss a class") {
  std::vector<ProgramTemplate> only_cmp;
  only_cmp.push_back(tiny_template());
  try {
    generate_corpus(only_cmp, 2, 1);
    FAIL("expected CoverageGap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoverageGap);
  }
}

TEST_CASE("every generated example differs from its reference by one splice") {
  Dataset ds = generate_corpus(builtin_templates(), 4, 123);
  for (const Example& ex : ds.examples) {
    const InjectedEdit& edit = ex.provenance->edit;
    CHECK(ex.reference_source.substr(edit.offset, edit.before.size()) == edit.before);
    std::string rebuilt = ex.reference_source.substr(0, edit.offset) + edit.after +
                          ex.reference_source.substr(edit.offset + edit.before.size());
    CHECK(rebuilt == ex.buggy_source);
    CHECK(ex.buggy_source != ex.reference_source);
  }
}

TEST_CASE("stratified split hits the rounded global total with per-class balance") {
  Dataset ds = generate_corpus(builtin_templates(), 32, 42);
  Dataset split = stratified_split(ds, 0.8, 42);
  CHECK(split.split_ratio == 0.8);
  CHECK(split.seed == 42);

  std::size_t train = 0;
  std::size_t val = 0;
  std::map<FixType, std::size_t> val_per_class;
  for (const Example& ex : split.examples) {
    REQUIRE(ex.split != Split::Unassigned);
    if (ex.split == Split::Train) ++train;
    if (ex.split == Split::Validation) {
      ++val;
      ++val_per_class[ex.gold_fix_type];
    }
  }
  CHECK(train == 230); // 288 - round(288 * 0.2)
  CHECK(val == 58);
  for (FixType type : all_fix_types()) {
    // 32 * 0.2 = 6.4, so the largest-remainder rounding gives 6 or 7.
    CHECK(val_per_class[type] >= 6);
    CHECK(val_per_class[type] <= 7);
  }

  // Ids and contents survive untouched; only the split field changes.
  std::multiset<std::string> before_ids, after_ids;
  for (const Example& ex : ds.examples) before_ids.insert(ex.id);
  for (const Example& ex : split.examples) after_ids.insert(ex.id);
  CHECK(before_ids == after_ids);

  Dataset split2 = stratified_split(ds, 0.8, 42);
  CHECK(split == split2);
  Dataset split3 = stratified_split(ds, 0.8, 43);
  bool any_moved = false;
  for (std::size_t i = 0; i < split.examples.size(); ++i) {
    if (split.examples[i].split != split3.examples[i].split) any_moved = true;
  }
  CHECK(any_moved);
}

TEST_CASE("stratified split validates its ratio and class sizes") {
  Dataset ds = generate_corpus(builtin_templates(), 2, 5);
  for (double ratio : {0.0, 1.0, -0.2, 1.5}) {
    CAPTURE(ratio);
    try {
      stratified_split(ds, ratio, 1);
      FAIL("expected ConfigError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConfigError);
    }
  }

  Dataset singles = generate_corpus(builtin_templates(), 1, 5);
  try {
    stratified_split(singles, 0.8, 1);
    FAIL("expected ClassTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ClassTooSmall);
  }
}

TEST_CASE("split_view filters by assignment") {
  Dataset ds = stratified_split(generate_corpus(builtin_templates(), 4, 9), 0.75, 9);
  auto train = ds.split_view(Split::Train);
  auto val = ds.split_view(Split::Validation);
  CHECK(train.size() + val.size() == ds.examples.size());
  CHECK(ds.split_view(Split::Unassigned).empty());
  for (const Example* ex : train) CHECK(ex->split == Split::Train);
  for (const Example* ex : val) CHECK(ex->split == Split::Validation);
}

TEST_CASE("templates survive a save/load round trip") {
  testsup::TmpDir tmp;
  save_templates(builtin_templates(), tmp.file("templates.json"));
  std::vector<ProgramTemplate> loaded = load_templates(tmp.file("templates.json"));
  REQUIRE(loaded.size() == builtin_templates().size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i] == builtin_templates()[i]);
  }

  try {
    load_templates(tmp.file("missing.json"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
