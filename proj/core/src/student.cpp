#include "fixlab/student.hpp"

#include <cmath>

#include "fixlab/error.hpp"
#include "fixlab/rng.hpp"

namespace fixlab {

const char* to_string(Variant variant) {
  return variant == Variant::LabelOnly ? "label_only" : "reasoning_distilled";
}

std::optional<Variant> variant_from_string(std::string_view name) {
  if (name == "label_only") return Variant::LabelOnly;
  if (name == "reasoning_distilled") return Variant::ReasoningDistilled;
  return std::nullopt;
}

NamedTensors StudentModel::named_parameters() {
  return {
      {"embedding", &embedding},     {"hidden_weight", &hidden_weight},
      {"hidden_bias", &hidden_bias}, {"fix_weight", &fix_weight},
      {"fix_bias", &fix_bias},       {"tag_weight", &tag_weight},
      {"tag_bias", &tag_bias},
  };
}

std::vector<std::pair<std::string, const Tensor2D*>> StudentModel::named_parameters() const {
  return {
      {"embedding", &embedding},     {"hidden_weight", &hidden_weight},
      {"hidden_bias", &hidden_bias}, {"fix_weight", &fix_weight},
      {"fix_bias", &fix_bias},       {"tag_weight", &tag_weight},
      {"tag_bias", &tag_bias},
  };
}

std::size_t StudentModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& [name, tensor] : named_parameters()) n += tensor->size();
  return n;
}

namespace {

void fill_uniform(Tensor2D& tensor, SeededRng& rng) {
  for (double& x : tensor.data) {
    double u;
    do {
      u = rng.uniform();
    } while (u == 0.0); // keep the interval open on both sides
    x = (u - 0.5) * 0.1;
  }
}

} // namespace

StudentModel init_student(const StudentConfig& config, std::uint64_t seed) {
  if (config.vocab_size < Vocabulary::kNumReservedIds) {
    raise(ErrorCode::ConfigError, "vocab_size must cover the reserved ids");
  }
  if (config.embed_dim == 0 || config.hidden_dim == 0 || config.max_len == 0) {
    raise(ErrorCode::ConfigError, "model dimensions must be positive");
  }
  StudentModel model;
  model.config = config;
  model.embedding = Tensor2D(config.vocab_size, config.embed_dim);
  model.hidden_weight = Tensor2D(config.embed_dim, config.hidden_dim);
  model.hidden_bias = Tensor2D(1, config.hidden_dim);
  model.fix_weight = Tensor2D(config.hidden_dim, kNumFixTypes);
  model.fix_bias = Tensor2D(1, kNumFixTypes);
  model.tag_weight = Tensor2D(config.hidden_dim, kNumReasoningTags);
  model.tag_bias = Tensor2D(1, kNumReasoningTags);

  SeededRng rng(seed);
  fill_uniform(model.embedding, rng);
  fill_uniform(model.hidden_weight, rng);
  fill_uniform(model.fix_weight, rng);
  fill_uniform(model.tag_weight, rng);
  return model;
}

std::vector<Tape::Var> StudentParamVars::ordered() const {
  return {embedding, hidden_weight, hidden_bias, fix_weight, fix_bias, tag_weight, tag_bias};
}

StudentParamVars lift_student(Tape& tape, const StudentModel& model) {
  StudentParamVars vars;
  vars.embedding = tape.leaf(model.embedding);
  vars.hidden_weight = tape.leaf(model.hidden_weight);
  vars.hidden_bias = tape.leaf(model.hidden_bias);
  vars.fix_weight = tape.leaf(model.fix_weight);
  vars.fix_bias = tape.leaf(model.fix_bias);
  vars.tag_weight = tape.leaf(model.tag_weight);
  vars.tag_bias = tape.leaf(model.tag_bias);
  return vars;
}

namespace {

struct HeadLogits {
  Tape::Var fix;
  Tape::Var tag;
};

HeadLogits forward_logits(Tape& tape, const StudentParamVars& params, const TokenSequence& input) {
  Tape::Var embedded = tape.embedding_lookup(params.embedding, input.ids);
  Tape::Var hidden =
      tape.relu(tape.add_bias(tape.matmul(embedded, params.hidden_weight), params.hidden_bias));
  Tape::Var pooled = tape.mean_pool_rows(hidden, input.attention_length);
  HeadLogits heads;
  heads.fix = tape.add_bias(tape.matmul(pooled, params.fix_weight), params.fix_bias);
  heads.tag = tape.add_bias(tape.matmul(pooled, params.tag_weight), params.tag_bias);
  return heads;
}

double stable_sigmoid_value(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

} // namespace

Prediction student_forward(const StudentModel& model, const TokenSequence& input) {
  if (input.ids.size() != model.config.max_len) {
    raise(ErrorCode::ShapeMismatch, "input length " + std::to_string(input.ids.size()) +
                                        " does not match max_len " +
                                        std::to_string(model.config.max_len));
  }
  Tape tape;
  StudentParamVars params = lift_student(tape, model);
  HeadLogits heads = forward_logits(tape, params, input);
  Tape::Var fix_probs = tape.softmax_rows(heads.fix);

  Prediction pred;
  const Tensor2D& probs = tape.value(fix_probs);
  pred.fix_probs.assign(probs.data.begin(), probs.data.end());
  const Tensor2D& tag_logits = tape.value(heads.tag);
  pred.tag_probs.reserve(kNumReasoningTags);
  for (double z : tag_logits.data) pred.tag_probs.push_back(stable_sigmoid_value(z));

  pred.predicted_fix = 0;
  for (std::size_t c = 1; c < pred.fix_probs.size(); ++c) {
    if (pred.fix_probs[c] > pred.fix_probs[static_cast<std::size_t>(pred.predicted_fix)]) {
      pred.predicted_fix = static_cast<int>(c);
    }
  }
  for (std::size_t t = 0; t < pred.tag_probs.size(); ++t) {
    if (pred.tag_probs[t] > model.config.tag_threshold) {
      pred.predicted_trace.tags.push_back(static_cast<ReasoningTag>(t));
    }
  }
  return pred;
}

double loss_label_only(const Prediction& pred, FixType gold) {
  return -std::log(pred.fix_probs[static_cast<std::size_t>(gold)]);
}

double loss_joint(const Prediction& pred, FixType gold, const ReasoningTrace& gold_trace,
                  double lambda) {
  double bce_sum = 0.0;
  for (std::size_t t = 0; t < kNumReasoningTags; ++t) {
    double p = pred.tag_probs[t];
    double y = gold_trace.contains(static_cast<ReasoningTag>(t)) ? 1.0 : 0.0;
    bce_sum += y > 0.5 ? -std::log(p) : -std::log1p(-p);
  }
  return loss_label_only(pred, gold) + lambda * (bce_sum / static_cast<double>(kNumReasoningTags));
}

Tape::Var student_example_loss(Tape& tape, const StudentParamVars& params,
                               const StudentConfig& config, const TokenSequence& input,
                               FixType gold, const ReasoningTrace* gold_trace, double lambda) {
  if (input.ids.size() != config.max_len) {
    raise(ErrorCode::ShapeMismatch, "input length does not match max_len");
  }
  HeadLogits heads = forward_logits(tape, params, input);
  Tape::Var ce = tape.softmax_cross_entropy(heads.fix, static_cast<std::size_t>(gold));
  if (gold_trace == nullptr) return ce;
  std::vector<double> targets(kNumReasoningTags, 0.0);
  for (ReasoningTag tag : gold_trace->tags) targets[static_cast<std::size_t>(tag)] = 1.0;
  Tape::Var bce = tape.sigmoid_bce_mean(heads.tag, targets);
  return tape.add(ce, tape.scale(bce, lambda));
}

} // namespace fixlab
