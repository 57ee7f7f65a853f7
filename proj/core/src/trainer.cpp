#include "fixlab/trainer.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fixlab/encode.hpp"
#include "fixlab/error.hpp"
#include "fixlab/tape.hpp"

namespace fixlab {

namespace {

using Json = nlohmann::ordered_json;

Json opt_json(const std::optional<double>& value) {
  return value ? Json(*value) : Json(nullptr);
}

} // namespace

std::vector<std::string> config_delta(const TrainConfig& a, const TrainConfig& b) {
  std::vector<std::string> out;
  if (a.variant != b.variant) out.push_back("variant");
  if (a.epochs != b.epochs) out.push_back("epochs");
  if (a.batch_size != b.batch_size) out.push_back("batch_size");
  if (a.learning_rate != b.learning_rate) out.push_back("learning_rate");
  if (a.lambda_reason != b.lambda_reason) out.push_back("lambda_reason");
  if (a.seed != b.seed) out.push_back("seed");
  if (a.embed_dim != b.embed_dim) out.push_back("embed_dim");
  if (a.hidden_dim != b.hidden_dim) out.push_back("hidden_dim");
  if (a.max_len != b.max_len) out.push_back("max_len");
  if (a.min_count != b.min_count) out.push_back("min_count");
  if (a.tag_threshold != b.tag_threshold) out.push_back("tag_threshold");
  return out;
}

std::string EpochLog::to_json() const {
  Json j;
  j["epoch"] = epoch;
  j["train_loss"] = train_loss;
  j["val_accuracy"] = opt_json(val_accuracy);
  j["val_macro_f1"] = opt_json(val_macro_f1);
  j["val_tag_micro_f1"] = opt_json(val_tag_micro_f1);
  j["val_exact_match"] = opt_json(val_exact_match);
  return j.dump();
}

TrainResult train_student(const Dataset& dataset, const TrainConfig& config,
                          const TrainResume* resume) {
  if (config.batch_size == 0) raise(ErrorCode::ConfigError, "batch_size must be positive");

  std::vector<const Example*> train = dataset.split_view(Split::Train);
  std::vector<const Example*> val = dataset.split_view(Split::Validation);
  if (train.empty()) raise(ErrorCode::EmptyTrainSplit, "dataset has no train examples");
  for (const Example* ex : train) {
    if (!ex->supervision || !ex->supervision->valid) {
      raise(ErrorCode::UnsupervisedExample,
            "train example '" + ex->id + "' has no valid supervision");
    }
  }

  const bool distilled = config.variant == Variant::ReasoningDistilled;

  Vocabulary vocab = resume ? resume->vocab : build_vocab(dataset, config.min_count);

  StudentConfig scfg;
  scfg.vocab_size = vocab.size();
  scfg.embed_dim = config.embed_dim;
  scfg.hidden_dim = config.hidden_dim;
  scfg.max_len = config.max_len;
  scfg.variant = config.variant;
  scfg.lambda_reason = config.lambda_reason;
  scfg.tag_threshold = config.tag_threshold;

  StudentModel model = resume ? resume->model : init_student(scfg, config.seed);
  if (resume && model.config != scfg) {
    raise(ErrorCode::ConfigError, "resume checkpoint disagrees with the train config");
  }

  std::vector<TokenSequence> inputs;
  inputs.reserve(train.size());
  for (const Example* ex : train) {
    inputs.push_back(encode_example(*ex, vocab, config.max_len));
  }

  AdamState adam = resume ? resume->adam : AdamState(AdamConfig{config.learning_rate});
  SeededRng shuffle_rng(config.seed);
  if (resume) shuffle_rng.set_state(resume->shuffle_state);
  std::size_t first_epoch = resume ? resume->epochs_done : 0;

  EvalOptions eval_options; // defaults; per-epoch metrics use the standard macro

  TrainResult result{std::move(model), std::move(vocab), {}, std::move(adam), {}, 0};

  for (std::size_t epoch = first_epoch; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order = shuffle_rng.permutation(train.size());
    double loss_sum = 0.0;

    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::size_t count = std::min(config.batch_size, order.size() - start);
      Tape tape;
      StudentParamVars params = lift_student(tape, result.model);
      Tape::Var batch_loss{};
      for (std::size_t k = 0; k < count; ++k) {
        const Example* ex = train[order[start + k]];
        const TeacherSupervision& sup = *ex->supervision;
        Tape::Var loss = student_example_loss(
            tape, params, result.model.config, inputs[order[start + k]], sup.fix_type,
            distilled ? &sup.trace : nullptr, config.lambda_reason);
        batch_loss = k == 0 ? loss : tape.add(batch_loss, loss);
      }
      batch_loss = tape.scale(batch_loss, 1.0 / static_cast<double>(count));
      tape.backward(batch_loss);

      NamedTensors named = result.model.named_parameters();
      std::vector<const Tensor2D*> grads;
      grads.reserve(named.size());
      for (Tape::Var var : params.ordered()) grads.push_back(&tape.grad(var));
      result.adam.step(named, grads);

      loss_sum += tape.value(batch_loss).at(0, 0) * static_cast<double>(count);
    }

    EpochLog log;
    log.epoch = epoch + 1;
    log.train_loss = loss_sum / static_cast<double>(train.size());
    if (!val.empty()) {
      EvalReport report = evaluate(result.model, result.vocab, dataset, Split::Validation,
                                   eval_options);
      log.val_accuracy = report.accuracy;
      log.val_macro_f1 = report.macro_f1;
      if (report.tags) {
        log.val_tag_micro_f1 = report.tags->micro_f1;
        log.val_exact_match = report.tags->exact_match;
      }
    }
    result.log.push_back(log);
  }

  result.shuffle_state = shuffle_rng.state();
  result.epochs_done = config.epochs;
  return result;
}

namespace {

void require_isolated(const TrainConfig& a, const TrainConfig& b) {
  std::vector<std::string> delta = config_delta(a, b);
  bool has_variant = false;
  for (const std::string& field : delta) {
    if (field == "variant") {
      has_variant = true;
    } else if (field != "lambda_reason") {
      raise(ErrorCode::ConfigError, "paired configs differ in '" + field +
                                        "'; only variant and lambda_reason may change");
    }
  }
  if (!has_variant) {
    raise(ErrorCode::ConfigError, "paired configs must differ in variant");
  }
}

} // namespace

PairedExperimentResult run_paired_experiment(const Dataset& dataset, const TrainConfig& base,
                                             const std::vector<std::uint64_t>& seeds,
                                             const EvalOptions& options) {
  if (seeds.empty()) raise(ErrorCode::ConfigError, "paired experiment needs at least one seed");

  PairedExperimentResult result;
  double sum_acc_lo = 0.0, sum_acc_rd = 0.0, sum_f1_lo = 0.0, sum_f1_rd = 0.0;

  for (std::uint64_t seed : seeds) {
    TrainConfig label_cfg = base;
    label_cfg.variant = Variant::LabelOnly;
    label_cfg.seed = seed;
    TrainConfig distilled_cfg = base;
    distilled_cfg.variant = Variant::ReasoningDistilled;
    distilled_cfg.seed = seed;
    require_isolated(label_cfg, distilled_cfg);

    TrainResult label_run = train_student(dataset, label_cfg);
    TrainResult distilled_run = train_student(dataset, distilled_cfg);

    EvalReport label_report =
        evaluate(label_run.model, label_run.vocab, dataset, Split::Validation, options);
    EvalReport distilled_report = evaluate(distilled_run.model, distilled_run.vocab, dataset,
                                           Split::Validation, options);

    sum_acc_lo += label_report.accuracy;
    sum_acc_rd += distilled_report.accuracy;
    sum_f1_lo += label_report.macro_f1;
    sum_f1_rd += distilled_report.macro_f1;
    if (distilled_report.macro_f1 > label_report.macro_f1) ++result.summary.distilled_wins;

    result.runs.push_back({seed, Variant::LabelOnly, std::move(label_report),
                           std::move(label_run.log)});
    result.runs.push_back({seed, Variant::ReasoningDistilled, std::move(distilled_report),
                           std::move(distilled_run.log)});
  }

  auto n = static_cast<double>(seeds.size());
  result.summary.num_seeds = seeds.size();
  result.summary.label_only_accuracy_mean = sum_acc_lo / n;
  result.summary.distilled_accuracy_mean = sum_acc_rd / n;
  result.summary.label_only_macro_f1_mean = sum_f1_lo / n;
  result.summary.distilled_macro_f1_mean = sum_f1_rd / n;
  result.summary.macro_f1_delta_mean = (sum_f1_rd - sum_f1_lo) / n;
  return result;
}

std::string PairedExperimentResult::to_json() const {
  Json j;
  Json runs_json = Json::array();
  for (const PairedRun& run : runs) {
    Json jr;
    jr["seed"] = run.seed;
    jr["variant"] = to_string(run.variant);
    jr["report"] = Json::parse(run.report.to_json());
    runs_json.push_back(std::move(jr));
  }
  j["runs"] = std::move(runs_json);
  Json js;
  js["num_seeds"] = summary.num_seeds;
  js["label_only_accuracy_mean"] = summary.label_only_accuracy_mean;
  js["distilled_accuracy_mean"] = summary.distilled_accuracy_mean;
  js["label_only_macro_f1_mean"] = summary.label_only_macro_f1_mean;
  js["distilled_macro_f1_mean"] = summary.distilled_macro_f1_mean;
  js["macro_f1_delta_mean"] = summary.macro_f1_delta_mean;
  js["distilled_wins"] = summary.distilled_wins;
  j["summary"] = std::move(js);
  return j.dump();
}

std::string PairedExperimentResult::render_text() const {
  char buf[256];
  std::string out = "paired runs (validation split)\n";
  out += "  seed  variant               accuracy  macro F1\n";
  for (const PairedRun& run : runs) {
    std::snprintf(buf, sizeof(buf), "  %-5llu %-21s %8.4f  %8.4f\n",
                  static_cast<unsigned long long>(run.seed), to_string(run.variant),
                  run.report.accuracy, run.report.macro_f1);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf),
                "means over %zu seed(s)\n"
                "  accuracy  label_only %.4f  reasoning_distilled %.4f\n"
                "  macro F1  label_only %.4f  reasoning_distilled %.4f\n"
                "  macro F1 delta %+.4f, distilled wins %zu/%zu\n",
                summary.num_seeds, summary.label_only_accuracy_mean,
                summary.distilled_accuracy_mean, summary.label_only_macro_f1_mean,
                summary.distilled_macro_f1_mean, summary.macro_f1_delta_mean,
                summary.distilled_wins, summary.num_seeds);
  out += buf;
  return out;
}

} // namespace fixlab
