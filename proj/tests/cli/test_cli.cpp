#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <doctest.h>
#include <fixlab/checkpoint.hpp>
#include <fixlab/corpus.hpp>
#include <json.hpp>

#include "stub_teacher.hpp"
#include "tmpdir.hpp"

// End-to-end coverage of the fixlab binary: every subcommand once, exit
// codes, artifact layout, and rerun determinism. The binary path comes in
// through FIXLAB_CLI_PATH.

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

class CliRunner {
 public:
  CliResult run(const std::string& args) {
    auto out_path = dir_.file("cli-out-" + std::to_string(counter_) + ".txt");
    auto err_path = dir_.file("cli-err-" + std::to_string(counter_) + ".txt");
    ++counter_;
    std::string command = "cd " + dir_.path().string() + " && " + FIXLAB_CLI_PATH + " " + args +
                          " > " + out_path.string() + " 2> " + err_path.string();
    int status = std::system(command.c_str());
    CliResult result;
    if (status != -1 && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
  }

  std::filesystem::path path(const std::string& name) const {
    return dir_.path() / name;
  }

 private:
  testsup::TmpDir dir_;
  int counter_ = 0;
};

std::string error_code_of(const CliResult& result) {
  nlohmann::json j = nlohmann::json::parse(result.err, nullptr, false);
  if (j.is_discarded() || !j.contains("error")) return "";
  return j["error"].value("code", "");
}

} // namespace

TEST_CASE("the binary walks a full pipeline deterministically") {
  CliRunner cli;

  SUBCASE("help exits cleanly") {
    CliResult help = cli.run("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("inject") != std::string::npos);
    CHECK(help.out.find("json-distill") != std::string::npos);
  }

  SUBCASE("a missing subcommand is a usage error") {
    CliResult bare = cli.run("");
    CHECK(bare.exit_code == 2);
    CHECK(error_code_of(bare) == "ConfigError");
  }

  SUBCASE("inject writes a reproducible corpus") {
    CliResult first = cli.run("inject --per-class 32 --seed 42 --out corpus.jsonl");
    REQUIRE(first.exit_code == 0);
    CHECK(first.out.find("wrote 288 examples") != std::string::npos);
    CHECK(first.out.find("WRONG_CONSTANT") != std::string::npos);
    std::string corpus = slurp(cli.path("corpus.jsonl"));
    CHECK(line_count(corpus) == 288);

    CliResult second = cli.run("inject --per-class 32 --seed 42 --out corpus2.jsonl");
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(cli.path("corpus2.jsonl")) == corpus);

    fixlab::Dataset ds = fixlab::load_dataset(cli.path("corpus.jsonl"));
    CHECK(ds.examples.size() == 288);
  }

  SUBCASE("inject failures map onto exit codes") {
    CliResult missing = cli.run("inject --templates nowhere.json --out x.jsonl");
    CHECK(missing.exit_code == 1);
    CHECK(error_code_of(missing) == "IoError");

    CliResult tiny = cli.run("inject --per-class 1 --split 0.5 --out x.jsonl");
    CHECK(tiny.exit_code == 2);
    CHECK(error_code_of(tiny) == "ClassTooSmall");

    CliResult range = cli.run("inject --split 1.5 --out x.jsonl");
    CHECK(range.exit_code == 2);
    CHECK(error_code_of(range) == "ConfigError");
  }

  SUBCASE("teach oracle supervises everything and reports it") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    CliResult teach = cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl");
    REQUIRE(teach.exit_code == 0);
    CHECK(teach.out.find("retained 36 of 36 examples") != std::string::npos);

    nlohmann::json report = nlohmann::json::parse(slurp(cli.path("sup.jsonl.filter.json")));
    CHECK(report["total"] == 36);
    CHECK(report["retained"] == 36);

    fixlab::Dataset sup = fixlab::load_dataset(cli.path("sup.jsonl"));
    for (const fixlab::Example& ex : sup.examples) {
      REQUIRE(ex.supervision.has_value());
      CHECK(ex.supervision->valid);
    }
  }

  SUBCASE("teach llm surfaces a fully rejected dataset as exit 3") {
    REQUIRE(cli.run("inject --per-class 1 --seed 7 --split 0 --out tiny.jsonl").exit_code == 0);
    testsup::StubTeacher stub([](std::size_t, const std::string&) {
      return std::make_pair(200, testsup::teacher_payload("LOOP_BOUND", {"STYLE_ISSUE"}));
    });
    CliResult teach = cli.run("teach --in tiny.jsonl --mode llm --endpoint " + stub.base_url() +
                              "/v1/complete --out rejected.jsonl");
    CHECK(teach.exit_code == 3);
    CHECK(error_code_of(teach) == "EmptySupervision");
    CHECK(stub.call_count() == 9);
    nlohmann::json report = nlohmann::json::parse(slurp(cli.path("rejected.jsonl.filter.json")));
    CHECK(report["retained"] == 0);
    CHECK(report["rejected"]["UnknownTag"] == 9);
  }

  SUBCASE("train writes its artifacts and honors flag precedence") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    REQUIRE(cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl").exit_code == 0);

    CliResult train = cli.run(
        "train --in sup.jsonl --variant reasoning_distilled --seed 3 --epochs 2 "
        "--batch-size 16 --embed-dim 8 --hidden-dim 12 --max-len 128 --run t1");
    REQUIRE(train.exit_code == 0);
    CHECK(train.out.find("fix-type prediction") != std::string::npos);
    CHECK(std::filesystem::is_regular_file(cli.path("runs/t1/config")));
    CHECK(std::filesystem::is_regular_file(cli.path("runs/t1/eval.json")));
    CHECK(std::filesystem::is_regular_file(cli.path("runs/t1/report")));
    CHECK(line_count(slurp(cli.path("runs/t1/log.jsonl"))) == 2);

    fixlab::Checkpoint final =
        fixlab::load_checkpoint(cli.path("runs/t1/checkpoints/final.json"));
    CHECK(final.epochs_done == 2);
    CHECK(final.model.config.hidden_dim == 12);
    REQUIRE(final.vocab.has_value());

    // Values from a config file are defaults; explicit flags still win.
    {
      std::ofstream cfg(cli.path("train.cfg"));
      cfg << "epochs=5\nhidden-dim=10\n";
    }
    CliResult cfg_run = cli.run(
        "train --in sup.jsonl --config train.cfg --epochs 1 --seed 3 "
        "--batch-size 16 --embed-dim 8 --max-len 128 --run t2");
    REQUIRE(cfg_run.exit_code == 0);
    CHECK(line_count(slurp(cli.path("runs/t2/log.jsonl"))) == 1); // flag beat the file
    fixlab::Checkpoint cfg_ckpt =
        fixlab::load_checkpoint(cli.path("runs/t2/checkpoints/final.json"));
    CHECK(cfg_ckpt.model.config.hidden_dim == 10); // file supplied the default

    // The final checkpoint resumes cleanly for two more epochs.
    CliResult resumed = cli.run(
        "train --in sup.jsonl --variant reasoning_distilled --seed 3 --epochs 4 "
        "--batch-size 16 --embed-dim 8 --hidden-dim 12 --max-len 128 "
        "--resume runs/t1/checkpoints/final.json --run t3");
    REQUIRE(resumed.exit_code == 0);
    CHECK(line_count(slurp(cli.path("runs/t3/log.jsonl"))) == 2); // epochs 3 and 4
  }

  SUBCASE("train without supervision is an unsupervised-example failure") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    CliResult train = cli.run("train --in small.jsonl --epochs 1 --run t0");
    CHECK(train.exit_code == 3);
    CHECK(error_code_of(train) == "UnsupervisedExample");
  }

  SUBCASE("eval scores a checkpoint from disk") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    REQUIRE(cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl").exit_code == 0);
    REQUIRE(cli.run("train --in sup.jsonl --variant reasoning_distilled --seed 3 --epochs 1 "
                    "--batch-size 16 --embed-dim 8 --hidden-dim 12 --max-len 128 --run t1")
                .exit_code == 0);

    CliResult eval_json = cli.run(
        "eval --checkpoint runs/t1/checkpoints/final.json --in sup.jsonl --json -");
    REQUIRE(eval_json.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(eval_json.out);
    CHECK(j["variant"] == "reasoning_distilled");
    CHECK(j["num_examples"] == 7); // validation side of 36 at 0.8
    CHECK(j.contains("accuracy"));

    REQUIRE(cli.run("train --in sup.jsonl --variant label_only --seed 3 --epochs 1 "
                    "--batch-size 16 --embed-dim 8 --hidden-dim 12 --max-len 128 --run lo")
                .exit_code == 0);
    CliResult eval_text = cli.run(
        "eval --checkpoint runs/lo/checkpoints/final.json --in sup.jsonl --split validation");
    REQUIRE(eval_text.exit_code == 0);
    CHECK(eval_text.out.find("not applicable (label_only has no trace output)") !=
          std::string::npos);

    CliResult bad_split = cli.run(
        "eval --checkpoint runs/t1/checkpoints/final.json --in sup.jsonl --split test");
    CHECK(bad_split.exit_code == 2);
  }

  SUBCASE("pair runs both variants per seed and is rerun-stable") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    REQUIRE(cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl").exit_code == 0);

    std::string flags =
        "pair --in sup.jsonl --seeds 4,5 --epochs 1 --batch-size 16 "
        "--embed-dim 8 --hidden-dim 12 --max-len 128";
    CliResult first = cli.run(flags + " --run p1");
    REQUIRE(first.exit_code == 0);
    CHECK(first.out.find("distilled wins") != std::string::npos);

    nlohmann::json pair = nlohmann::json::parse(slurp(cli.path("runs/p1/pair.json")));
    CHECK(pair["runs"].size() == 4); // two variants for each of two seeds
    CHECK(pair["summary"]["num_seeds"] == 2);

    CliResult second = cli.run(flags + " --run p2");
    REQUIRE(second.exit_code == 0);
    CHECK(slurp(cli.path("runs/p2/pair.json")) == slurp(cli.path("runs/p1/pair.json")));
    CHECK(slurp(cli.path("runs/p2/log.jsonl")) == slurp(cli.path("runs/p1/log.jsonl")));
  }

  SUBCASE("json-distill writes the study artifacts") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    REQUIRE(cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl").exit_code == 0);
    CliResult study = cli.run(
        "json-distill --in sup.jsonl --seed 2 --subsample 8 --epochs 1 --embed-dim 6 "
        "--hidden-dim 10 --max-len 96 --max-output-len 300 --cls-epochs 1 --run j1");
    REQUIRE(study.exit_code == 0);
    CHECK(study.out.find("json validity") != std::string::npos);

    nlohmann::json j = nlohmann::json::parse(slurp(cli.path("runs/j1/study.json")));
    CHECK(j["train_size"] == 8);
    CHECK(j["subsample"] == 8);
    CHECK(j["validation"].contains("json_validity"));
    CHECK(line_count(slurp(cli.path("runs/j1/log.jsonl"))) == 1);
  }

  SUBCASE("report summarizes a run directory") {
    REQUIRE(cli.run("inject --per-class 4 --seed 9 --out small.jsonl").exit_code == 0);
    REQUIRE(cli.run("teach --in small.jsonl --mode oracle --out sup.jsonl").exit_code == 0);
    REQUIRE(cli.run("train --in sup.jsonl --seed 3 --epochs 1 --batch-size 16 --embed-dim 8 "
                    "--hidden-dim 12 --max-len 128 --run t1")
                .exit_code == 0);

    CliResult report = cli.run("report runs/t1");
    REQUIRE(report.exit_code == 0);
    CHECK(report.out.find("artifacts:") != std::string::npos);
    CHECK(report.out.find("log.jsonl") != std::string::npos);
    CHECK(report.out.find("== report ==") != std::string::npos);

    CliResult missing = cli.run("report no-such-run");
    CHECK(missing.exit_code == 1);
    CHECK(error_code_of(missing) == "IoError");
  }
}
