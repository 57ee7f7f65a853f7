#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <fixlab/corpus.hpp>
#include <fixlab/error.hpp>
#include <json.hpp>

#include "corpus_fixtures.hpp"
#include "tmpdir.hpp"

using namespace fixlab;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

} // namespace

TEST_CASE("jsonl round trip preserves every field") {
  Dataset ds = testsup::supervised_corpus(3, 11);
  std::string text = to_jsonl(ds);
  Dataset back = dataset_from_jsonl(text);
  CHECK(back == ds);

  // Supervision, splits, and provenance all survive.
  REQUIRE(back.examples.size() == ds.examples.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const Example& a = ds.examples[i];
    const Example& b = back.examples[i];
    CHECK(a.id == b.id);
    CHECK(a.split == b.split);
    REQUIRE(b.supervision.has_value());
    CHECK(b.supervision->fix_type == a.supervision->fix_type);
    CHECK(b.supervision->trace.tags == a.supervision->trace.tags);
    CHECK(b.supervision->valid == a.supervision->valid);
    REQUIRE(b.provenance.has_value());
    CHECK(b.provenance->edit.offset == a.provenance->edit.offset);
  }
}

TEST_CASE("one line per example, keys in the canonical order") {
  Dataset ds = testsup::supervised_corpus(2, 4);
  std::string text = to_jsonl(ds);
  std::vector<std::string> lines = split_lines(text);
  CHECK(lines.size() == ds.examples.size());
  CHECK(lines.size() == 18);
  CHECK(text.back() == '\n');

  const std::vector<std::string> expected_keys = {
      "id",           "buggy_source", "reference_source", "failing_behavior",
      "gold_fix_type", "supervision",  "split",            "provenance"};
  for (const std::string& line : lines) {
    Json j = Json::parse(line);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == expected_keys);
  }
}

TEST_CASE("serialization is byte-stable across calls and through files") {
  Dataset ds = testsup::supervised_corpus(2, 8);
  std::string first = to_jsonl(ds);
  std::string second = to_jsonl(ds);
  CHECK(first == second);

  testsup::TmpDir tmp;
  save_dataset(ds, tmp.file("ds.jsonl"));
  std::ifstream in(tmp.file("ds.jsonl"), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == first);

  CHECK(load_dataset(tmp.file("ds.jsonl")) == ds);
}

TEST_CASE("format errors carry the offending line number") {
  Dataset ds = testsup::supervised_corpus(2, 2);
  std::vector<std::string> lines = split_lines(to_jsonl(ds));
  REQUIRE(lines.size() >= 3);

  SUBCASE("missing gold_fix_type") {
    Json j = Json::parse(lines[2]);
    j.erase("gold_fix_type");
    std::string text = lines[0] + "\n" + lines[1] + "\n" + j.dump() + "\n";
    try {
      dataset_from_jsonl(text);
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatError);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
      CHECK(std::string(e.what()).find("gold_fix_type") != std::string::npos);
    }
  }

  SUBCASE("unparseable json") {
    std::string text = lines[0] + "\n{this is not json\n" + lines[1] + "\n";
    try {
      dataset_from_jsonl(text);
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }

  SUBCASE("unknown fix type") {
    Json j = Json::parse(lines[0]);
    j["gold_fix_type"] = "SPOOKY";
    try {
      dataset_from_jsonl(j.dump() + "\n");
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatError);
      CHECK(std::string(e.what()).find("SPOOKY") != std::string::npos);
    }
  }

  SUBCASE("unknown split") {
    Json j = Json::parse(lines[0]);
    j["split"] = "test";
    try {
      dataset_from_jsonl(j.dump() + "\n");
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatError);
    }
  }

  SUBCASE("unknown reasoning tag in supervision") {
    Json j = Json::parse(lines[0]);
    j["supervision"]["trace"] = {"CMP_ERROR", "VIBES"};
    try {
      dataset_from_jsonl(j.dump() + "\n");
      FAIL("expected FormatError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::FormatError);
      CHECK(std::string(e.what()).find("VIBES") != std::string::npos);
    }
  }
}

TEST_CASE("empty input and blank lines are tolerated") {
  CHECK(dataset_from_jsonl("").examples.empty());
  Dataset ds = testsup::supervised_corpus(2, 3);
  std::vector<std::string> lines = split_lines(to_jsonl(ds));
  std::string spaced = lines[0] + "\n\n" + lines[1] + "\n\n\n" + lines[2] + "\n";
  Dataset back = dataset_from_jsonl(spaced);
  CHECK(back.examples.size() == 3);
}

TEST_CASE("null supervision and null provenance round trip") {
  Example ex;
  ex.id = "bare";
  ex.buggy_source = "int main(void) { return 1; }\n";
  ex.reference_source = "int main(void) { return 0; }\n";
  ex.failing_behavior.push_back({"", "0", "wrong exit status"});
  ex.gold_fix_type = FixType::WRONG_RETURN;
  Dataset ds;
  ds.examples.push_back(ex);

  std::string text = to_jsonl(ds);
  CHECK(text.find("\"supervision\":null") != std::string::npos);
  CHECK(text.find("\"provenance\":null") != std::string::npos);
  CHECK(text.find("\"split\":null") != std::string::npos);

  Dataset back = dataset_from_jsonl(text);
  REQUIRE(back.examples.size() == 1);
  CHECK_FALSE(back.examples[0].supervision.has_value());
  CHECK_FALSE(back.examples[0].provenance.has_value());
  CHECK(back.examples[0].split == Split::Unassigned);
  CHECK(back == ds);
}

TEST_CASE("loading a missing dataset is an io error") {
  testsup::TmpDir tmp;
  try {
    load_dataset(tmp.file("nope.jsonl"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
}
