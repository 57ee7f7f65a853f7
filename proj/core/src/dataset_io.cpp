#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixlab/corpus.hpp"
#include "fixlab/error.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;

Json supervision_to_json(const TeacherSupervision& sup) {
  Json j;
  j["fix_type"] = to_string(sup.fix_type);
  Json tags = Json::array();
  for (ReasoningTag tag : sup.trace.tags) tags.push_back(to_string(tag));
  j["trace"] = std::move(tags);
  j["source"] = to_string(sup.source);
  j["valid"] = sup.valid;
  return j;
}

Json example_to_json(const Example& ex) {
  Json j;
  j["id"] = ex.id;
  j["buggy_source"] = ex.buggy_source;
  j["reference_source"] = ex.reference_source;
  Json behaviors = Json::array();
  for (const FailingBehavior& b : ex.failing_behavior) {
    Json jb;
    jb["input"] = b.input;
    jb["expected_output"] = b.expected_output;
    jb["observed"] = b.observed;
    behaviors.push_back(std::move(jb));
  }
  j["failing_behavior"] = std::move(behaviors);
  j["gold_fix_type"] = to_string(ex.gold_fix_type);
  j["supervision"] = ex.supervision ? supervision_to_json(*ex.supervision) : Json(nullptr);
  switch (ex.split) {
    case Split::Unassigned: j["split"] = nullptr; break;
    default: j["split"] = to_string(ex.split); break;
  }
  if (ex.provenance) {
    Json jp;
    jp["template_id"] = ex.provenance->template_id;
    jp["site_id"] = ex.provenance->edit.site_id;
    jp["site_kind"] = to_string(ex.provenance->edit.site_kind);
    jp["offset"] = ex.provenance->edit.offset;
    jp["before"] = ex.provenance->edit.before;
    jp["after"] = ex.provenance->edit.after;
    j["provenance"] = std::move(jp);
  } else {
    j["provenance"] = nullptr;
  }
  return j;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  raise(ErrorCode::FormatError, "line " + std::to_string(line) + ": " + why);
}

std::string require_string(const Json& j, const char* key, std::size_t line) {
  if (!j.contains(key)) bad_line(line, std::string("missing key '") + key + "'");
  if (!j[key].is_string()) bad_line(line, std::string("key '") + key + "' must be a string");
  return j[key].get<std::string>();
}

Example example_from_json(const Json& j, std::size_t line) {
  if (!j.is_object()) bad_line(line, "expected a JSON object");
  Example ex;
  ex.id = require_string(j, "id", line);
  ex.buggy_source = require_string(j, "buggy_source", line);
  ex.reference_source = require_string(j, "reference_source", line);

  if (!j.contains("failing_behavior") || !j["failing_behavior"].is_array()) {
    bad_line(line, "missing or non-array 'failing_behavior'");
  }
  for (const Json& jb : j["failing_behavior"]) {
    FailingBehavior b;
    b.input = require_string(jb, "input", line);
    b.expected_output = require_string(jb, "expected_output", line);
    b.observed = require_string(jb, "observed", line);
    ex.failing_behavior.push_back(std::move(b));
  }

  std::string gold = require_string(j, "gold_fix_type", line);
  auto gold_type = fix_type_from_string(gold);
  if (!gold_type) bad_line(line, "unknown gold_fix_type '" + gold + "'");
  ex.gold_fix_type = *gold_type;

  if (!j.contains("supervision")) bad_line(line, "missing key 'supervision'");
  if (!j["supervision"].is_null()) {
    const Json& js = j["supervision"];
    TeacherSupervision sup;
    std::string fix = require_string(js, "fix_type", line);
    auto fix_type = fix_type_from_string(fix);
    if (!fix_type) bad_line(line, "unknown supervision fix_type '" + fix + "'");
    sup.fix_type = *fix_type;
    if (!js.contains("trace") || !js["trace"].is_array()) {
      bad_line(line, "supervision trace must be an array");
    }
    for (const Json& jt : js["trace"]) {
      if (!jt.is_string()) bad_line(line, "trace entries must be strings");
      auto tag = reasoning_tag_from_string(jt.get<std::string>());
      if (!tag) bad_line(line, "unknown reasoning tag '" + jt.get<std::string>() + "'");
      sup.trace.tags.push_back(*tag);
    }
    std::string source = require_string(js, "source", line);
    auto src = supervision_source_from_string(source);
    if (!src) bad_line(line, "unknown supervision source '" + source + "'");
    sup.source = *src;
    if (!js.contains("valid") || !js["valid"].is_boolean()) {
      bad_line(line, "supervision 'valid' must be a boolean");
    }
    sup.valid = js["valid"].get<bool>();
    ex.supervision = std::move(sup);
  }

  if (!j.contains("split")) bad_line(line, "missing key 'split'");
  if (j["split"].is_null()) {
    ex.split = Split::Unassigned;
  } else if (j["split"].is_string()) {
    std::string s = j["split"].get<std::string>();
    if (s == "train") ex.split = Split::Train;
    else if (s == "validation") ex.split = Split::Validation;
    else bad_line(line, "unknown split '" + s + "'");
  } else {
    bad_line(line, "'split' must be null or a string");
  }

  if (j.contains("provenance") && !j["provenance"].is_null()) {
    const Json& jp = j["provenance"];
    Provenance prov;
    prov.template_id = require_string(jp, "template_id", line);
    prov.edit.site_id = require_string(jp, "site_id", line);
    std::string kind = require_string(jp, "site_kind", line);
    auto site_kind = site_kind_from_string(kind);
    if (!site_kind) bad_line(line, "unknown site_kind '" + kind + "'");
    prov.edit.site_kind = *site_kind;
    if (!jp.contains("offset") || !jp["offset"].is_number_unsigned()) {
      bad_line(line, "provenance 'offset' must be a non-negative integer");
    }
    prov.edit.offset = jp["offset"].get<std::size_t>();
    prov.edit.before = require_string(jp, "before", line);
    prov.edit.after = require_string(jp, "after", line);
    ex.provenance = std::move(prov);
  }
  return ex;
}

Json parse_line(const std::string& text, std::size_t line) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) bad_line(line, "invalid JSON");
  return j;
}

} // namespace

std::string to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const Example& ex : dataset.examples) {
    out += example_to_json(ex).dump();
    out += '\n';
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ds.examples.push_back(example_from_json(parse_line(line, line_no), line_no));
  }
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << to_jsonl(dataset);
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_jsonl(buf.str());
}

// --- template files --------------------------------------------------------

std::vector<ProgramTemplate> load_templates(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("templates") || !j["templates"].is_array()) {
    raise(ErrorCode::FormatError, "'" + path.string() + "' is not a template file");
  }
  std::vector<ProgramTemplate> out;
  for (const Json& jt : j["templates"]) {
    if (!jt.is_object() || !jt.contains("id") || !jt.contains("markup")) {
      raise(ErrorCode::FormatError, "template entries need 'id' and 'markup'");
    }
    std::vector<ProgramTemplate::RenamePool> pools;
    if (jt.contains("rename_pools")) {
      for (const Json& jp : jt["rename_pools"]) {
        ProgramTemplate::RenamePool pool;
        pool.first = jp.at("name").get<std::string>();
        for (const Json& opt : jp.at("options")) pool.second.push_back(opt.get<std::string>());
        pools.push_back(std::move(pool));
      }
    }
    std::vector<TemplateTestCase> tests;
    if (jt.contains("tests")) {
      for (const Json& jc : jt["tests"]) {
        tests.push_back({jc.at("input").get<std::string>(),
                         jc.at("expected_output").get<std::string>()});
      }
    }
    out.push_back(ProgramTemplate::parse(jt["id"].get<std::string>(),
                                         jt["markup"].get<std::string>(), std::move(pools),
                                         std::move(tests)));
  }
  return out;
}

void save_templates(const std::vector<ProgramTemplate>& templates,
                    const std::filesystem::path& path) {
  Json j;
  j["version"] = "1";
  Json list = Json::array();
  for (const ProgramTemplate& tmpl : templates) {
    Json jt;
    jt["id"] = tmpl.id();
    jt["markup"] = tmpl.markup();
    Json pools = Json::array();
    for (const auto& pool : tmpl.rename_pools()) {
      Json jp;
      jp["name"] = pool.first;
      jp["options"] = pool.second;
      pools.push_back(std::move(jp));
    }
    jt["rename_pools"] = std::move(pools);
    Json tests = Json::array();
    for (const TemplateTestCase& test : tmpl.tests()) {
      Json jc;
      jc["input"] = test.input;
      jc["expected_output"] = test.expected_output;
      tests.push_back(std::move(jc));
    }
    jt["tests"] = std::move(tests);
    list.push_back(std::move(jt));
  }
  j["templates"] = std::move(list);
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

std::string mutation_tables_to_json() {
  const MutationTables& tables = mutation_tables();
  Json j;
  j["version"] = tables.version;
  Json maps;
  for (const auto& [kind, entries] : tables.token_maps) {
    Json jk;
    for (const auto& [from, to_list] : entries) jk[from] = to_list;
    maps[kind] = std::move(jk);
  }
  j["token_maps"] = std::move(maps);
  return j.dump(2) + "\n";
}

} // namespace fixlab
