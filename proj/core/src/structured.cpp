#include "fixlab/structured.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <span>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "fixlab/error.hpp"
#include "fixlab/rng.hpp"
#include "fixlab/student.hpp"
#include "fixlab/tape.hpp"
#include "fixlab/teacher.hpp"

namespace fixlab {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON targets

namespace {

// One line per edit-site kind, all well under the 20-token budget.
const char* explanation_for(SiteKind kind) {
  switch (kind) {
    case SiteKind::Comparison: return "replace the comparison operator with the intended one";
    case SiteKind::LoopBound: return "correct the loop bound so iteration stops correctly";
    case SiteKind::BinaryOperator: return "restore the intended arithmetic operator";
    case SiteKind::Initialization: return "restore the correct initial value";
    case SiteKind::SwitchCase: return "restore the removed case block";
    case SiteKind::ArrayIndex: return "shift the array index back by one";
    case SiteKind::ReturnExpr: return "return the intended expression";
    case SiteKind::IoFormat: return "fix the output format string";
    case SiteKind::Constant: return "restore the correct constant value";
  }
  return "";
}

} // namespace

std::string serialize_json_target(const JsonTarget& target) {
  Json j;
  j["defect_class"] = to_string(target.defect_class);
  j["patch"] = target.patch;
  j["explanation"] = target.explanation;
  return j.dump();
}

JsonTarget make_json_target(const Example& example) {
  if (!example.provenance)
    raise(ErrorCode::MissingProvenance, "example " + example.id + " carries no edit record");
  JsonTarget target;
  target.defect_class = example.gold_fix_type;
  target.patch = make_unified_diff(example.buggy_source, example.reference_source);
  target.explanation = explanation_for(example.provenance->edit.site_kind);
  return target;
}

std::optional<ParsedTarget> parse_structured_output(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || j.size() != 3) return std::nullopt;
  for (const char* key : {"defect_class", "patch", "explanation"})
    if (!j.contains(key) || !j[key].is_string()) return std::nullopt;
  return ParsedTarget{j["defect_class"].get<std::string>(), j["patch"].get<std::string>(),
                      j["explanation"].get<std::string>()};
}

// ---------------------------------------------------------------------------
// Output-side tokenization

std::vector<std::string> segment_text(const std::string& text) {
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };

  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t begin = i;
    if (is_word(text[i])) {
      while (i < text.size() && is_word(text[i])) ++i;
    } else if (is_digit(text[i])) {
      while (i < text.size() && is_digit(text[i])) ++i;
    } else {
      ++i;
    }
    out.push_back(text.substr(begin, i - begin));
  }
  return out;
}

OutputVocabulary::OutputVocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] =
        index_.emplace(tokens_[i], static_cast<int>(kNumReservedIds + i));
    if (!inserted)
      raise(ErrorCode::FormatError, "output vocabulary: duplicate token '" + tokens_[i] + "'");
  }
}

int OutputVocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

const std::string& OutputVocabulary::token(int id) const {
  std::size_t real = static_cast<std::size_t>(id) - kNumReservedIds;
  if (id < static_cast<int>(kNumReservedIds) || real >= tokens_.size())
    raise(ErrorCode::ConfigError, "output vocabulary: id " + std::to_string(id) +
                                      " has no surface form");
  return tokens_[real];
}

OutputVocabulary build_output_vocab(const std::vector<std::string>& targets,
                                    std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const std::string& target : targets)
    for (std::string& token : segment_text(target)) ++counts[std::move(token)];

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [token, count] : counts)
    if (count >= min_count) kept.emplace_back(token, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, count] : kept) tokens.push_back(token);
  return OutputVocabulary(std::move(tokens));
}

// ---------------------------------------------------------------------------
// Decoder model

NamedTensors DecoderModel::named_parameters() {
  return {
      {"enc_embedding", &enc_embedding},
      {"enc_hidden_weight", &enc_hidden_weight},
      {"enc_hidden_bias", &enc_hidden_bias},
      {"out_embedding", &out_embedding},
      {"xh_weight", &xh_weight},
      {"hh_weight", &hh_weight},
      {"state_bias", &state_bias},
      {"out_weight", &out_weight},
      {"out_bias", &out_bias},
  };
}

std::vector<std::pair<std::string, const Tensor2D*>> DecoderModel::named_parameters() const {
  return {
      {"enc_embedding", &enc_embedding},
      {"enc_hidden_weight", &enc_hidden_weight},
      {"enc_hidden_bias", &enc_hidden_bias},
      {"out_embedding", &out_embedding},
      {"xh_weight", &xh_weight},
      {"hh_weight", &hh_weight},
      {"state_bias", &state_bias},
      {"out_weight", &out_weight},
      {"out_bias", &out_bias},
  };
}

std::size_t DecoderModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, tensor] : named_parameters()) n += tensor->size();
  return n;
}

std::string DecoderModel::to_json() const {
  Json j;
  j["format"] = "fixlab-decoder";
  j["version"] = 1;
  j["config"] = Json{{"embed_dim", config.embed_dim},
                     {"hidden_dim", config.hidden_dim},
                     {"max_len", config.max_len},
                     {"out_embed_dim", config.out_embed_dim},
                     {"max_output_len", config.max_output_len},
                     {"epochs", config.epochs},
                     {"learning_rate", config.learning_rate},
                     {"seed", config.seed},
                     {"min_count", config.min_count}};
  j["input_vocab"] = input_vocab.tokens();
  j["output_vocab"] = output_vocab.tokens();
  Json params = Json::object();
  for (const auto& [name, tensor] : named_parameters()) {
    params[name] =
        Json{{"rows", tensor->rows}, {"cols", tensor->cols}, {"data", tensor->data}};
  }
  j["params"] = std::move(params);
  return j.dump(2);
}

namespace {

// Same recipe as the student's init: open-interval uniform fills in
// named-parameter order, biases zero.
void fill_uniform(Tensor2D& tensor, SeededRng& rng) {
  for (double& x : tensor.data) {
    double u;
    do {
      u = rng.uniform();
    } while (u == 0.0);
    x = (u - 0.5) * 0.1;
  }
}

DecoderModel init_decoder(const DecoderConfig& config, Vocabulary input_vocab,
                          OutputVocabulary output_vocab) {
  if (config.embed_dim == 0 || config.hidden_dim == 0 || config.out_embed_dim == 0 ||
      config.max_len == 0 || config.max_output_len == 0)
    raise(ErrorCode::ConfigError, "decoder dimensions must be positive");

  DecoderModel model;
  model.config = config;
  model.input_vocab = std::move(input_vocab);
  model.output_vocab = std::move(output_vocab);
  std::size_t in_vocab = model.input_vocab.size();
  std::size_t out_vocab = model.output_vocab.size();
  model.enc_embedding = Tensor2D(in_vocab, config.embed_dim);
  model.enc_hidden_weight = Tensor2D(config.embed_dim, config.hidden_dim);
  model.enc_hidden_bias = Tensor2D(1, config.hidden_dim);
  model.out_embedding = Tensor2D(out_vocab, config.out_embed_dim);
  model.xh_weight = Tensor2D(config.out_embed_dim, config.hidden_dim);
  model.hh_weight = Tensor2D(config.hidden_dim, config.hidden_dim);
  model.state_bias = Tensor2D(1, config.hidden_dim);
  model.out_weight = Tensor2D(config.hidden_dim, out_vocab);
  model.out_bias = Tensor2D(1, out_vocab);

  SeededRng rng(config.seed);
  fill_uniform(model.enc_embedding, rng);
  fill_uniform(model.enc_hidden_weight, rng);
  fill_uniform(model.out_embedding, rng);
  fill_uniform(model.xh_weight, rng);
  fill_uniform(model.hh_weight, rng);
  fill_uniform(model.out_weight, rng);
  return model;
}

struct DecoderParamVars {
  Tape::Var enc_embedding, enc_hidden_weight, enc_hidden_bias;
  Tape::Var out_embedding, xh_weight, hh_weight, state_bias, out_weight, out_bias;

  std::vector<Tape::Var> ordered() const {
    return {enc_embedding, enc_hidden_weight, enc_hidden_bias, out_embedding, xh_weight,
            hh_weight,     state_bias,        out_weight,      out_bias};
  }
};

DecoderParamVars lift_decoder(Tape& tape, const DecoderModel& model) {
  DecoderParamVars p;
  p.enc_embedding = tape.leaf(model.enc_embedding);
  p.enc_hidden_weight = tape.leaf(model.enc_hidden_weight);
  p.enc_hidden_bias = tape.leaf(model.enc_hidden_bias);
  p.out_embedding = tape.leaf(model.out_embedding);
  p.xh_weight = tape.leaf(model.xh_weight);
  p.hh_weight = tape.leaf(model.hh_weight);
  p.state_bias = tape.leaf(model.state_bias);
  p.out_weight = tape.leaf(model.out_weight);
  p.out_bias = tape.leaf(model.out_bias);
  return p;
}

// Teacher-forced mean cross-entropy over [target..., EOS].
Tape::Var decoder_example_loss(Tape& tape, const DecoderParamVars& p,
                               const TokenSequence& input, const std::vector<int>& target) {
  Tape::Var embedded = tape.embedding_lookup(p.enc_embedding, input.ids);
  Tape::Var hidden = tape.relu(
      tape.add_bias(tape.matmul(embedded, p.enc_hidden_weight), p.enc_hidden_bias));
  Tape::Var state = tape.mean_pool_rows(hidden, input.attention_length);

  std::vector<int> in_ids;
  in_ids.reserve(target.size() + 1);
  in_ids.push_back(OutputVocabulary::kBosId);
  in_ids.insert(in_ids.end(), target.begin(), target.end());
  std::vector<int> out_ids = target;
  out_ids.push_back(OutputVocabulary::kEosId);

  Tape::Var total;
  for (std::size_t t = 0; t < in_ids.size(); ++t) {
    Tape::Var x = tape.embedding_lookup(p.out_embedding, std::span(&in_ids[t], 1));
    state = tape.relu(tape.add_bias(
        tape.add(tape.matmul(x, p.xh_weight), tape.matmul(state, p.hh_weight)), p.state_bias));
    Tape::Var logits = tape.add_bias(tape.matmul(state, p.out_weight), p.out_bias);
    Tape::Var ce = tape.softmax_cross_entropy(logits, static_cast<std::size_t>(out_ids[t]));
    total = t == 0 ? ce : tape.add(total, ce);
  }
  return tape.scale(total, 1.0 / static_cast<double>(in_ids.size()));
}

// Plain-math counterparts for greedy decoding (no gradients needed).

std::vector<double> encoder_state(const DecoderModel& m, const TokenSequence& input) {
  std::size_t embed = m.config.embed_dim;
  std::size_t hidden = m.config.hidden_dim;
  std::vector<double> pooled(hidden, 0.0);
  for (std::size_t r = 0; r < input.attention_length; ++r) {
    std::size_t id = static_cast<std::size_t>(input.ids[r]);
    for (std::size_t j = 0; j < hidden; ++j) {
      double v = m.enc_hidden_bias.data[j];
      for (std::size_t k = 0; k < embed; ++k)
        v += m.enc_embedding.data[id * embed + k] * m.enc_hidden_weight.data[k * hidden + j];
      pooled[j] += std::max(v, 0.0);
    }
  }
  for (double& v : pooled) v /= static_cast<double>(input.attention_length);
  return pooled;
}

std::vector<double> decoder_step(const DecoderModel& m, int prev_id,
                                 const std::vector<double>& state) {
  std::size_t oe = m.config.out_embed_dim;
  std::size_t hidden = m.config.hidden_dim;
  std::size_t row = static_cast<std::size_t>(prev_id);
  std::vector<double> next(hidden, 0.0);
  for (std::size_t j = 0; j < hidden; ++j) {
    double v = m.state_bias.data[j];
    for (std::size_t k = 0; k < oe; ++k)
      v += m.out_embedding.data[row * oe + k] * m.xh_weight.data[k * hidden + j];
    for (std::size_t k = 0; k < hidden; ++k) v += state[k] * m.hh_weight.data[k * hidden + j];
    next[j] = std::max(v, 0.0);
  }
  return next;
}

int argmax_logit(const DecoderModel& m, const std::vector<double>& state) {
  std::size_t hidden = m.config.hidden_dim;
  std::size_t vocab = m.output_vocab.size();
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < vocab; ++v) {
    double logit = m.out_bias.data[v];
    for (std::size_t j = 0; j < hidden; ++j) logit += state[j] * m.out_weight.data[j * vocab + v];
    if (logit > best_value) { // strict: ties keep the lowest index
      best_value = logit;
      best = static_cast<int>(v);
    }
  }
  return best;
}

} // namespace

DecoderTrainResult train_decoder(const Dataset& dataset, const DecoderConfig& config) {
  std::vector<const Example*> train;
  for (const Example& ex : dataset.examples)
    if (ex.split == Split::Train) train.push_back(&ex);
  if (train.empty()) raise(ErrorCode::EmptyTrainSplit, "decoder training needs train examples");

  Vocabulary input_vocab = build_vocab(dataset, config.min_count);
  std::vector<std::string> targets;
  targets.reserve(train.size());
  for (const Example* ex : train) targets.push_back(serialize_json_target(make_json_target(*ex)));
  OutputVocabulary output_vocab = build_output_vocab(targets, config.min_count);

  DecoderModel model = init_decoder(config, std::move(input_vocab), std::move(output_vocab));

  std::vector<TokenSequence> inputs;
  inputs.reserve(train.size());
  for (const Example* ex : train)
    inputs.push_back(encode_example(*ex, model.input_vocab, config.max_len));
  std::vector<std::vector<int>> target_ids;
  target_ids.reserve(targets.size());
  for (const std::string& target : targets) {
    std::vector<int> ids;
    for (const std::string& token : segment_text(target))
      ids.push_back(model.output_vocab.id(token));
    // Keep room for the EOS step within the decode budget.
    if (ids.size() + 1 > config.max_output_len) ids.resize(config.max_output_len - 1);
    target_ids.push_back(std::move(ids));
  }

  AdamState adam{AdamConfig{config.learning_rate}};
  SeededRng shuffle_rng(config.seed);
  std::vector<double> epoch_losses;
  epoch_losses.reserve(config.epochs);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<std::size_t> order = shuffle_rng.permutation(train.size());
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      Tape tape;
      DecoderParamVars params = lift_decoder(tape, model);
      Tape::Var loss = decoder_example_loss(tape, params, inputs[idx], target_ids[idx]);
      tape.backward(loss);

      NamedTensors named = model.named_parameters();
      std::vector<const Tensor2D*> grads;
      grads.reserve(named.size());
      for (Tape::Var var : params.ordered()) grads.push_back(&tape.grad(var));
      adam.step(named, grads);

      loss_sum += tape.value(loss).at(0, 0);
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(train.size()));
  }
  return {std::move(model), std::move(epoch_losses)};
}

std::string decode_structured(const DecoderModel& model, const Example& example) {
  TokenSequence input = encode_example(example, model.input_vocab, model.config.max_len);
  std::vector<double> state = encoder_state(model, input);
  std::string out;
  int prev = OutputVocabulary::kBosId;
  for (std::size_t step = 0; step < model.config.max_output_len; ++step) {
    state = decoder_step(model, prev, state);
    int next = argmax_logit(model, state);
    if (next == OutputVocabulary::kEosId) break;
    if (next >= static_cast<int>(OutputVocabulary::kNumReservedIds))
      out += model.output_vocab.token(next);
    prev = next;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

StructuredEval evaluate_structured(const DecoderModel& model, const Dataset& dataset,
                                   const std::vector<std::size_t>& indices,
                                   const StructuredEvalOptions& options) {
  if (indices.empty()) raise(ErrorCode::EmptySplit, "structured evaluation over zero examples");

  std::size_t valid = 0;
  std::size_t exact = 0;
  std::size_t applied = 0;
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t index : indices) {
    const Example& example = dataset.examples.at(index);
    std::string text = decode_structured(model, example);
    std::optional<ParsedTarget> parsed = parse_structured_output(text);
    if (!parsed) {
      if (options.micro_over_all) ++fn; // a missing prediction for the gold class
      continue;
    }
    ++valid;
    if (parsed->defect_class == to_string(example.gold_fix_type)) {
      ++exact;
      ++tp;
    } else {
      ++fn;
      // Only a string that names a real class is a positive for that class.
      if (fix_type_from_string(parsed->defect_class)) ++fp;
    }
    try {
      apply_patch(example.buggy_source, parsed->patch);
      ++applied;
    } catch (const Error&) {
    }
  }

  StructuredEval result;
  result.num_examples = indices.size();
  result.num_valid = valid;
  result.json_validity = static_cast<double>(valid) / static_cast<double>(indices.size());
  result.defect_exact_match = static_cast<double>(exact) / static_cast<double>(indices.size());
  if (tp + fp + fn == 0) {
    result.defect_micro_f1 = 0.0; // no decisions at all (no valid outputs)
  } else {
    double precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    result.defect_micro_f1 =
        precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  result.patch_apply_rate =
      valid > 0 ? static_cast<double>(applied) / static_cast<double>(valid) : 0.0;
  return result;
}

// ---------------------------------------------------------------------------
// Study orchestration

ThreeWaySplit split_three_way(const Dataset& dataset, std::uint64_t seed, double val_fraction,
                              double test_fraction) {
  if (!(val_fraction > 0.0) || !(test_fraction > 0.0) || !(val_fraction + test_fraction < 1.0))
    raise(ErrorCode::ConfigError, "three-way split fractions must be positive and sum below 1");
  std::size_t n = dataset.examples.size();
  std::size_t n_val = static_cast<std::size_t>(std::floor(n * val_fraction + 0.5));
  std::size_t n_test = static_cast<std::size_t>(std::floor(n * test_fraction + 0.5));
  if (n_val == 0 || n_test == 0 || n_val + n_test >= n)
    raise(ErrorCode::ConfigError,
          "dataset of " + std::to_string(n) + " examples is too small for a three-way split");

  SeededRng rng(seed);
  std::vector<std::size_t> perm = rng.permutation(n);
  ThreeWaySplit split;
  split.validation.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_val));
  split.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_val),
                    perm.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
  split.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), perm.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.train.begin(), split.train.end());
  return split;
}

namespace {

Json structured_eval_to_json(const StructuredEval& eval) {
  return Json{{"num_examples", eval.num_examples},
              {"num_valid", eval.num_valid},
              {"json_validity", eval.json_validity},
              {"defect_exact_match", eval.defect_exact_match},
              {"defect_micro_f1", eval.defect_micro_f1},
              {"patch_apply_rate", eval.patch_apply_rate}};
}

} // namespace

std::string StructuredStudyResult::to_json() const {
  Json j;
  j["train_size"] = train_size;
  j["subsample"] = config.subsample;
  j["seed"] = config.seed;
  j["micro_over_all"] = config.eval.micro_over_all;
  j["validation"] = structured_eval_to_json(validation);
  j["test"] = structured_eval_to_json(test);
  j["classifier"] = Json{{"variant", to_string(config.classifier.variant)},
                         {"val_accuracy", classifier_val_accuracy},
                         {"test_accuracy", classifier_test_accuracy}};
  j["decoder"] = Json{{"epochs", config.decoder.epochs},
                      {"epoch_losses", decoder_epoch_losses}};
  return j.dump(2);
}

std::string StructuredStudyResult::render_text() const {
  std::ostringstream out;
  out << "structured study: " << train_size << " train examples, seed " << config.seed << "\n";
  char line[128];
  auto row = [&](const char* name, double val, double test_value) {
    std::snprintf(line, sizeof line, "  %-22s %10.4f %10.4f\n", name, val, test_value);
    out << line;
  };
  std::snprintf(line, sizeof line, "  %-22s %10s %10s\n", "", "validation", "test");
  out << line;
  row("json validity", validation.json_validity, test.json_validity);
  row("defect exact match", validation.defect_exact_match, test.defect_exact_match);
  row("defect micro F1", validation.defect_micro_f1, test.defect_micro_f1);
  row("patch apply rate", validation.patch_apply_rate, test.patch_apply_rate);
  row("classifier accuracy", classifier_val_accuracy, classifier_test_accuracy);
  return out.str();
}

StructuredStudyResult run_structured_study(const Dataset& dataset,
                                           const StructuredStudyConfig& config) {
  ThreeWaySplit split = split_three_way(dataset, config.seed);

  std::vector<std::size_t> train = split.train;
  if (config.subsample > 0 && config.subsample < train.size()) {
    // A salted stream keeps the subsample draw independent of the split draw.
    SeededRng rng(config.seed ^ 0x73756273616d70ULL);
    std::vector<std::size_t> perm = rng.permutation(train.size());
    std::vector<std::size_t> kept;
    kept.reserve(config.subsample);
    for (std::size_t i = 0; i < config.subsample; ++i) kept.push_back(train[perm[i]]);
    std::sort(kept.begin(), kept.end());
    train = std::move(kept);
  }

  Dataset local = dataset;
  for (Example& ex : local.examples) ex.split = Split::Unassigned;
  for (std::size_t i : train) local.examples[i].split = Split::Train;
  for (std::size_t i : split.validation) local.examples[i].split = Split::Validation;
  for (Example& ex : local.examples) {
    if ((!ex.supervision || !ex.supervision->valid) && ex.provenance)
      ex.supervision = oracle_supervise(ex);
  }

  StructuredStudyResult result;
  result.config = config;
  result.train_size = train.size();

  DecoderTrainResult decoder = train_decoder(local, config.decoder);
  result.decoder_epoch_losses = decoder.epoch_losses;
  result.validation = evaluate_structured(decoder.model, local, split.validation, config.eval);
  result.test = evaluate_structured(decoder.model, local, split.test, config.eval);

  TrainResult classifier = train_student(local, config.classifier);
  auto accuracy_over = [&](const std::vector<std::size_t>& indices) {
    std::size_t correct = 0;
    for (std::size_t i : indices) {
      TokenSequence seq =
          encode_example(local.examples[i], classifier.vocab, classifier.model.config.max_len);
      Prediction pred = student_forward(classifier.model, seq);
      if (pred.predicted_fix == static_cast<int>(local.examples[i].gold_fix_type)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(indices.size());
  };
  result.classifier_val_accuracy = accuracy_over(split.validation);
  result.classifier_test_accuracy = accuracy_over(split.test);
  return result;
}

} // namespace fixlab
