// fixlab command-line front end. Each subcommand is a thin wrapper over the
// library: all semantics live in core, the CLI only moves bytes and maps
// errors onto exit codes (0 ok, 1 I/O, 2 corpus/config, 3 empty supervision).

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fixlab/checkpoint.hpp"
#include "fixlab/corpus.hpp"
#include "fixlab/error.hpp"
#include "fixlab/metrics.hpp"
#include "fixlab/structured.hpp"
#include "fixlab/taxonomy.hpp"
#include "fixlab/teacher.hpp"
#include "fixlab/trainer.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void print_error_json(const std::string& code, const std::string& message) {
  Json body;
  body["error"] = Json{{"code", code}, {"message", message}};
  std::cerr << body.dump() << "\n";
}

int exit_code_for(fixlab::ErrorCode code) {
  switch (code) {
    case fixlab::ErrorCode::IoError:
    case fixlab::ErrorCode::FormatError:
    case fixlab::ErrorCode::TransportError:
      return 1;
    case fixlab::ErrorCode::UnsupervisedExample:
      return 3;
    default:
      return 2;
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fixlab::raise(fixlab::ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    fixlab::raise(fixlab::ErrorCode::IoError, "short write to '" + path.string() + "'");
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fixlab::raise(fixlab::ErrorCode::IoError, "cannot open '" + path.string() + "' for reading");
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

fs::path make_run_dir(const std::string& root, const std::string& name) {
  fs::path dir = fs::path(root) / name;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    fixlab::raise(fixlab::ErrorCode::IoError,
                  "cannot create run directory '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

fixlab::Variant parse_variant(const std::string& name) {
  std::optional<fixlab::Variant> variant = fixlab::variant_from_string(name);
  if (!variant) {
    fixlab::raise(fixlab::ErrorCode::ConfigError, "unknown variant '" + name + "'");
  }
  return *variant;
}

fixlab::Split parse_split(const std::string& name) {
  if (name == "train") return fixlab::Split::Train;
  if (name == "validation") return fixlab::Split::Validation;
  fixlab::raise(fixlab::ErrorCode::ConfigError, "unknown split '" + name + "'");
}

// "http://host:port/some/path" -> {"http://host:port", "/some/path"}.
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
  const std::size_t scheme = url.find("://");
  if (scheme == std::string::npos) {
    fixlab::raise(fixlab::ErrorCode::ConfigError,
                  "endpoint '" + url + "' lacks a scheme (expected e.g. http://127.0.0.1:8700/v1/complete)");
  }
  const std::size_t slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/v1/complete"};
  return {url.substr(0, slash), url.substr(slash)};
}

// ---------------------------------------------------------------------------
// shared flag groups

struct RunDirOpts {
  std::string name;
  std::string root = "runs";
};

void add_run_flags(CLI::App* cmd, RunDirOpts& run, const std::string& default_name) {
  run.name = default_name;
  cmd->add_option("--run", run.name, "Run name under the runs root")->capture_default_str();
  cmd->add_option("--runs-root", run.root, "Directory holding run artifacts")->capture_default_str();
}

void add_train_flags(CLI::App* cmd, fixlab::TrainConfig& config) {
  cmd->add_option("--epochs", config.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--batch-size", config.batch_size, "Minibatch size")->capture_default_str();
  cmd->add_option("--lr", config.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--lambda", config.lambda_reason, "Reasoning-loss weight (distilled variant)")
      ->capture_default_str();
  cmd->add_option("--embed-dim", config.embed_dim, "Token embedding width")->capture_default_str();
  cmd->add_option("--hidden-dim", config.hidden_dim, "Hidden layer width")->capture_default_str();
  cmd->add_option("--max-len", config.max_len, "Input truncation length in tokens")
      ->capture_default_str();
  cmd->add_option("--min-count", config.min_count, "Vocabulary frequency floor")
      ->capture_default_str();
  cmd->add_option("--tag-threshold", config.tag_threshold, "Sigmoid threshold for tag predictions")
      ->capture_default_str();
}

struct EvalFlagOpts {
  bool macro_exclude_absent = false;
  bool trace_set_semantics = false;

  fixlab::EvalOptions options() const {
    return {.macro_include_absent = !macro_exclude_absent,
            .trace_set_semantics = trace_set_semantics};
  }
};

void add_eval_flags(CLI::App* cmd, EvalFlagOpts& opts) {
  cmd->add_flag("--macro-exclude-absent", opts.macro_exclude_absent,
                "Average macro F1 over classes present in gold only");
  cmd->add_flag("--trace-set-semantics", opts.trace_set_semantics,
                "Compare traces as tag sets instead of ordered sequences");
}

// ---------------------------------------------------------------------------
// inject

struct InjectOpts {
  std::string templates_path;
  std::size_t per_class = 32;
  std::uint64_t seed = 1;
  std::string out;
  double split = 0.8;
};

int run_inject(const InjectOpts& opts) {
  const std::vector<fixlab::ProgramTemplate> templates =
      opts.templates_path.empty() ? fixlab::builtin_templates()
                                  : fixlab::load_templates(opts.templates_path);
  fixlab::Dataset dataset = fixlab::generate_corpus(templates, opts.per_class, opts.seed);
  if (opts.split > 0.0) {
    dataset = fixlab::stratified_split(std::move(dataset), opts.split, opts.seed);
  }
  fixlab::save_dataset(dataset, opts.out);

  std::array<std::size_t, fixlab::kNumFixTypes> total{};
  std::array<std::size_t, fixlab::kNumFixTypes> train{};
  for (const fixlab::Example& example : dataset.examples) {
    const auto cls = static_cast<std::size_t>(example.gold_fix_type);
    ++total[cls];
    if (example.split == fixlab::Split::Train) ++train[cls];
  }
  std::cout << "wrote " << dataset.examples.size() << " examples to " << opts.out << "\n";
  char line[96];
  if (opts.split > 0.0) {
    std::snprintf(line, sizeof line, "  %-18s %6s %6s %6s", "fix type", "total", "train", "val");
    std::cout << line << "\n";
    for (std::size_t cls = 0; cls < fixlab::kNumFixTypes; ++cls) {
      std::snprintf(line, sizeof line, "  %-18s %6zu %6zu %6zu",
                    fixlab::to_string(static_cast<fixlab::FixType>(cls)), total[cls], train[cls],
                    total[cls] - train[cls]);
      std::cout << line << "\n";
    }
  } else {
    std::snprintf(line, sizeof line, "  %-18s %6s", "fix type", "total");
    std::cout << line << "\n";
    for (std::size_t cls = 0; cls < fixlab::kNumFixTypes; ++cls) {
      std::snprintf(line, sizeof line, "  %-18s %6zu",
                    fixlab::to_string(static_cast<fixlab::FixType>(cls)), total[cls]);
      std::cout << line << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// teach

struct TeachOpts {
  std::string in;
  std::string out;
  std::string mode = "oracle";
  std::string endpoint;
  std::string report_path;
  std::string model = "teacher-large";
  double temperature = 0.0;
  std::size_t concurrency = 1;
  int timeout_seconds = 30;
  int max_attempts = 4;
  std::string auth_env = "FIXLAB_TEACHER_TOKEN";
};

int run_teach(const TeachOpts& opts) {
  const fixlab::Dataset dataset = fixlab::load_dataset(opts.in);
  const fixlab::TeacherMode mode =
      opts.mode == "oracle" ? fixlab::TeacherMode::Oracle : fixlab::TeacherMode::Llm;

  fixlab::TeacherEndpointConfig endpoint_config;
  const fixlab::TeacherEndpointConfig* endpoint_ptr = nullptr;
  if (mode == fixlab::TeacherMode::Llm) {
    if (opts.endpoint.empty()) {
      fixlab::raise(fixlab::ErrorCode::ConfigError, "--mode llm requires --endpoint");
    }
    const auto [base_url, path] = split_endpoint(opts.endpoint);
    endpoint_config.base_url = base_url;
    endpoint_config.path = path;
    endpoint_config.model = opts.model;
    endpoint_config.temperature = opts.temperature;
    endpoint_config.concurrency = opts.concurrency;
    endpoint_config.timeout_seconds = opts.timeout_seconds;
    endpoint_config.max_attempts = opts.max_attempts;
    endpoint_config.auth_token_env = opts.auth_env;
    endpoint_ptr = &endpoint_config;
  }

  const auto [supervised, report] = fixlab::supervise_dataset(dataset, mode, endpoint_ptr);
  fixlab::save_dataset(supervised, opts.out);
  const std::string report_path =
      opts.report_path.empty() ? opts.out + ".filter.json" : opts.report_path;
  write_text_file(report_path, report.to_json() + "\n");

  std::cout << "retained " << report.retained << " of " << report.total << " examples\n";
  for (std::size_t reason = 0; reason < fixlab::kNumRejectReasons; ++reason) {
    if (report.rejected[reason] == 0) continue;
    std::cout << "  rejected " << report.rejected[reason] << " ("
              << fixlab::to_string(static_cast<fixlab::RejectReason>(reason)) << ")\n";
  }
  std::cout << "filter report: " << report_path << "\n";
  if (report.retained == 0) {
    print_error_json("EmptySupervision", "no examples retained after supervision filtering");
    return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
  std::string in;
  std::string variant = "reasoning_distilled";
  std::string resume_path;
  fixlab::TrainConfig config;
  EvalFlagOpts eval;
  RunDirOpts run;
};

int run_train(const TrainOpts& opts, CLI::App* cmd) {
  const fixlab::Dataset dataset = fixlab::load_dataset(opts.in);
  fixlab::TrainConfig config = opts.config;
  config.variant = parse_variant(opts.variant);

  std::optional<fixlab::TrainResume> resume;
  if (!opts.resume_path.empty()) {
    resume = fixlab::as_resume(fixlab::load_checkpoint(opts.resume_path));
  }

  const fs::path dir = make_run_dir(opts.run.root, opts.run.name);
  std::error_code ec;
  fs::create_directories(dir / "checkpoints", ec);
  if (ec) {
    fixlab::raise(fixlab::ErrorCode::IoError, "cannot create '" + (dir / "checkpoints").string() +
                                                  "': " + ec.message());
  }
  write_text_file(dir / "config", cmd->config_to_str(true, false));

  const fixlab::TrainResult result =
      fixlab::train_student(dataset, config, resume ? &*resume : nullptr);

  std::string log_text;
  for (const fixlab::EpochLog& entry : result.log) log_text += entry.to_json() + "\n";
  write_text_file(dir / "log.jsonl", log_text);
  fixlab::save_checkpoint(fixlab::make_checkpoint(result), dir / "checkpoints" / "final.json");

  const bool has_validation =
      std::any_of(dataset.examples.begin(), dataset.examples.end(), [](const fixlab::Example& e) {
        return e.split == fixlab::Split::Validation;
      });
  if (has_validation) {
    const fixlab::EvalReport report =
        fixlab::evaluate(result.model, result.vocab, dataset, fixlab::Split::Validation,
                         opts.eval.options());
    write_text_file(dir / "eval.json", report.to_json() + "\n");
    write_text_file(dir / "report", report.render_text());
    std::cout << report.render_text();
  } else {
    write_text_file(dir / "report", "no validation split; evaluation skipped\n");
    std::cout << "no validation split; evaluation skipped\n";
  }
  std::cout << "run artifacts in " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalCmdOpts {
  std::string checkpoint;
  std::string in;
  std::string split = "validation";
  std::string json_path;
  EvalFlagOpts eval;
};

int run_eval(const EvalCmdOpts& opts) {
  const fixlab::Checkpoint checkpoint = fixlab::load_checkpoint(opts.checkpoint);
  if (!checkpoint.vocab) {
    fixlab::raise(fixlab::ErrorCode::ConfigError,
                  "checkpoint '" + opts.checkpoint + "' carries no vocabulary block");
  }
  const fixlab::Dataset dataset = fixlab::load_dataset(opts.in);
  const fixlab::EvalReport report = fixlab::evaluate(
      checkpoint.model, *checkpoint.vocab, dataset, parse_split(opts.split), opts.eval.options());
  if (opts.json_path == "-") {
    std::cout << report.to_json() << "\n";
  } else {
    std::cout << report.render_text();
    if (!opts.json_path.empty()) write_text_file(opts.json_path, report.to_json() + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// pair

struct PairOpts {
  std::string in;
  std::vector<std::uint64_t> seeds = {1};
  fixlab::TrainConfig base;
  EvalFlagOpts eval;
  RunDirOpts run;
};

int run_pair(const PairOpts& opts, CLI::App* cmd) {
  const fixlab::Dataset dataset = fixlab::load_dataset(opts.in);
  const fixlab::PairedExperimentResult result =
      fixlab::run_paired_experiment(dataset, opts.base, opts.seeds, opts.eval.options());

  const fs::path dir = make_run_dir(opts.run.root, opts.run.name);
  write_text_file(dir / "config", cmd->config_to_str(true, false));

  std::string log_text;
  for (const fixlab::PairedRun& run : result.runs) {
    for (const fixlab::EpochLog& entry : run.log) {
      Json merged;
      merged["seed"] = run.seed;
      merged["variant"] = fixlab::to_string(run.variant);
      merged.update(Json::parse(entry.to_json()));
      log_text += merged.dump() + "\n";
    }
  }
  write_text_file(dir / "log.jsonl", log_text);
  write_text_file(dir / "pair.json", result.to_json() + "\n");
  write_text_file(dir / "report", result.render_text());
  std::cout << result.render_text();
  std::cout << "run artifacts in " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// json-distill

struct StudyOpts {
  std::string in;
  std::uint64_t seed = 1;
  fixlab::StructuredStudyConfig config;
  std::string cls_variant = "reasoning_distilled";
  RunDirOpts run;
};

int run_study(StudyOpts opts, CLI::App* cmd) {
  const fixlab::Dataset dataset = fixlab::load_dataset(opts.in);
  // One seed knob drives the split/subsample draw and both model inits.
  opts.config.seed = opts.seed;
  opts.config.decoder.seed = opts.seed;
  opts.config.classifier.seed = opts.seed;
  opts.config.classifier.variant = parse_variant(opts.cls_variant);

  const fixlab::StructuredStudyResult result = fixlab::run_structured_study(dataset, opts.config);

  const fs::path dir = make_run_dir(opts.run.root, opts.run.name);
  write_text_file(dir / "config", cmd->config_to_str(true, false));
  std::string log_text;
  for (std::size_t epoch = 0; epoch < result.decoder_epoch_losses.size(); ++epoch) {
    Json entry;
    entry["epoch"] = epoch + 1;
    entry["train_loss"] = result.decoder_epoch_losses[epoch];
    log_text += entry.dump() + "\n";
  }
  write_text_file(dir / "log.jsonl", log_text);
  write_text_file(dir / "study.json", result.to_json() + "\n");
  write_text_file(dir / "report", result.render_text());
  std::cout << result.render_text();
  std::cout << "run artifacts in " << dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report

struct ReportOpts {
  std::string dir;
};

int run_report(const ReportOpts& opts) {
  const fs::path dir(opts.dir);
  if (!fs::is_directory(dir)) {
    fixlab::raise(fixlab::ErrorCode::IoError, "run directory '" + opts.dir + "' does not exist");
  }
  std::vector<std::string> artifacts;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) {
      for (const auto& nested : fs::directory_iterator(entry.path())) {
        artifacts.push_back(entry.path().filename().string() + "/" +
                            nested.path().filename().string());
      }
    } else {
      artifacts.push_back(entry.path().filename().string());
    }
  }
  if (artifacts.empty()) {
    fixlab::raise(fixlab::ErrorCode::IoError, "run directory '" + opts.dir + "' has no artifacts");
  }
  std::sort(artifacts.begin(), artifacts.end());

  std::cout << "run directory: " << dir.string() << "\n";
  std::cout << "artifacts:\n";
  for (const std::string& name : artifacts) std::cout << "  " << name << "\n";

  if (fs::is_regular_file(dir / "config")) {
    std::cout << "\n== config ==\n" << read_text_file(dir / "config");
  }
  if (fs::is_regular_file(dir / "log.jsonl")) {
    const std::string text = read_text_file(dir / "log.jsonl");
    std::size_t lines = 0;
    std::string last;
    std::size_t start = 0;
    while (start < text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      if (end > start) {
        ++lines;
        last = text.substr(start, end - start);
      }
      start = end + 1;
    }
    std::cout << "\n== log.jsonl ==\n" << lines << " entries\n";
    if (!last.empty()) std::cout << "last: " << last << "\n";
  }
  for (const char* name : {"eval.json", "pair.json", "study.json"}) {
    if (fs::is_regular_file(dir / name)) {
      std::cout << "\n== " << name << " ==\n" << read_text_file(dir / name);
    }
  }
  if (fs::is_regular_file(dir / "report")) {
    std::cout << "\n== report ==\n" << read_text_file(dir / "report");
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixlab: buggy-C corpus generation, teacher supervision, and student distillation"};
  app.require_subcommand(1);
  int rc = 0;

  InjectOpts inject;
  CLI::App* inject_cmd =
      app.add_subcommand("inject", "Generate a labeled buggy-program corpus (JSONL)");
  inject_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  inject_cmd->add_option("--templates", inject.templates_path,
                         "Template JSON file (builtin templates when omitted)");
  inject_cmd->add_option("--per-class", inject.per_class, "Examples per fix type")
      ->capture_default_str();
  inject_cmd->add_option("--seed", inject.seed, "Corpus seed")->capture_default_str();
  inject_cmd->add_option("--out", inject.out, "Output dataset path")->required();
  inject_cmd->add_option("--split", inject.split, "Train fraction (0 disables the split)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  inject_cmd->callback([&] { rc = run_inject(inject); });

  TeachOpts teach;
  CLI::App* teach_cmd = app.add_subcommand("teach", "Attach teacher supervision to a dataset");
  teach_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  teach_cmd->add_option("--in", teach.in, "Input dataset path")->required();
  teach_cmd->add_option("--mode", teach.mode, "Teacher backend")
      ->check(CLI::IsMember({"oracle", "llm"}))
      ->capture_default_str();
  teach_cmd->add_option("--endpoint", teach.endpoint, "Teacher endpoint URL (llm mode)");
  teach_cmd->add_option("--out", teach.out, "Output dataset path")->required();
  teach_cmd->add_option("--filter-report", teach.report_path,
                        "Filter report path (default: <out>.filter.json)");
  teach_cmd->add_option("--model", teach.model, "Model name sent to the endpoint")
      ->capture_default_str();
  teach_cmd->add_option("--temperature", teach.temperature, "Sampling temperature")
      ->capture_default_str();
  teach_cmd->add_option("--concurrency", teach.concurrency, "Parallel endpoint requests")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  teach_cmd->add_option("--timeout", teach.timeout_seconds, "Per-request timeout in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  teach_cmd->add_option("--max-attempts", teach.max_attempts, "Tries per example before giving up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  teach_cmd->add_option("--auth-env", teach.auth_env,
                        "Environment variable holding the bearer token")
      ->capture_default_str();
  teach_cmd->callback([&] { rc = run_teach(teach); });

  TrainOpts train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train one student variant");
  train_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  train_cmd->add_option("--in", train.in, "Supervised dataset path")->required();
  train_cmd->add_option("--variant", train.variant, "Student objective")
      ->check(CLI::IsMember({"label_only", "reasoning_distilled"}))
      ->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed, "Init/shuffle seed")->capture_default_str();
  add_train_flags(train_cmd, train.config);
  train_cmd->add_option("--resume", train.resume_path, "Checkpoint to continue from");
  add_eval_flags(train_cmd, train.eval);
  add_run_flags(train_cmd, train.run, "train");
  train_cmd->callback([&] { rc = run_train(train, train_cmd); });

  EvalCmdOpts eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a checkpoint on one dataset split");
  eval_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint path")->required();
  eval_cmd->add_option("--in", eval.in, "Dataset path")->required();
  eval_cmd->add_option("--split", eval.split, "Split to score")
      ->check(CLI::IsMember({"train", "validation"}))
      ->capture_default_str();
  eval_cmd->add_option("--json", eval.json_path, "Write the JSON report here ('-' for stdout)");
  add_eval_flags(eval_cmd, eval.eval);
  eval_cmd->callback([&] { rc = run_eval(eval); });

  PairOpts pair;
  CLI::App* pair_cmd =
      app.add_subcommand("pair", "Run the paired label-only vs reasoning-distilled experiment");
  pair_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  pair_cmd->add_option("--in", pair.in, "Supervised dataset path")->required();
  pair_cmd->add_option("--seeds", pair.seeds, "Training seeds")
      ->delimiter(',')
      ->capture_default_str();
  add_train_flags(pair_cmd, pair.base);
  add_eval_flags(pair_cmd, pair.eval);
  add_run_flags(pair_cmd, pair.run, "pair");
  pair_cmd->callback([&] { rc = run_pair(pair, pair_cmd); });

  StudyOpts study;
  CLI::App* study_cmd =
      app.add_subcommand("json-distill", "Run the low-data structured-output study");
  study_cmd->set_config("--config", "", "Read flag defaults from a key=value file");
  study_cmd->add_option("--in", study.in, "Dataset path")->required();
  study_cmd->add_option("--seed", study.seed, "Split/subsample and model seed")
      ->capture_default_str();
  study_cmd->add_option("--subsample", study.config.subsample,
                        "Training examples kept for both arms (0 keeps all)")
      ->capture_default_str();
  study_cmd->add_option("--epochs", study.config.decoder.epochs, "Decoder training epochs")
      ->capture_default_str();
  study_cmd->add_option("--lr", study.config.decoder.learning_rate, "Decoder learning rate")
      ->capture_default_str();
  study_cmd->add_option("--embed-dim", study.config.decoder.embed_dim, "Encoder embedding width")
      ->capture_default_str();
  study_cmd->add_option("--hidden-dim", study.config.decoder.hidden_dim,
                        "Encoder/recurrent state width")
      ->capture_default_str();
  study_cmd->add_option("--out-embed-dim", study.config.decoder.out_embed_dim,
                        "Output-token embedding width")
      ->capture_default_str();
  study_cmd->add_option("--max-len", study.config.decoder.max_len,
                        "Input truncation length in tokens")
      ->capture_default_str();
  study_cmd->add_option("--max-output-len", study.config.decoder.max_output_len,
                        "Decode length cap in tokens")
      ->capture_default_str();
  study_cmd->add_option("--min-count", study.config.decoder.min_count,
                        "Vocabulary frequency floor")
      ->capture_default_str();
  study_cmd->add_option("--cls-variant", study.cls_variant, "Classifier arm objective")
      ->check(CLI::IsMember({"label_only", "reasoning_distilled"}))
      ->capture_default_str();
  study_cmd->add_option("--cls-epochs", study.config.classifier.epochs,
                        "Classifier arm training epochs")
      ->capture_default_str();
  study_cmd->add_option("--cls-lambda", study.config.classifier.lambda_reason,
                        "Classifier arm reasoning-loss weight")
      ->capture_default_str();
  study_cmd->add_flag("--micro-over-all", study.config.eval.micro_over_all,
                      "Score defect micro F1 over all examples, not just valid JSON");
  add_run_flags(study_cmd, study.run, "json-distill");
  study_cmd->callback([&] { rc = run_study(study, study_cmd); });

  ReportOpts report;
  CLI::App* report_cmd = app.add_subcommand("report", "Summarize a run directory");
  report_cmd->add_option("dir", report.dir, "Run directory")->required();
  report_cmd->callback([&] { rc = run_report(report); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      return app.exit(e); // --help and friends
    }
    print_error_json("ConfigError", e.what());
    return 2;
  } catch (const fixlab::Error& e) {
    print_error_json(fixlab::to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error_json("Internal", e.what());
    return 2;
  }
  return rc;
}
