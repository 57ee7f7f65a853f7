#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fixlab/encode.hpp"
#include "fixlab/optim.hpp"
#include "fixlab/tape.hpp"
#include "fixlab/taxonomy.hpp"
#include "fixlab/tensor.hpp"

namespace fixlab {

enum class Variant { LabelOnly, ReasoningDistilled };

const char* to_string(Variant variant);
std::optional<Variant> variant_from_string(std::string_view name);

struct StudentConfig {
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  std::size_t max_len = 256;
  Variant variant = Variant::LabelOnly;
  double lambda_reason = 1.0;
  double tag_threshold = 0.5;

  bool operator==(const StudentConfig&) const = default;
};

/// Mean-pooled bag-of-embeddings classifier with two linear heads. The tag
/// head exists in both variants so parameter counts match; the label-only
/// objective simply never routes gradient into it.
struct StudentModel {
  StudentConfig config;
  Tensor2D embedding{0, 0};     // vocab_size x embed_dim
  Tensor2D hidden_weight{0, 0}; // embed_dim x hidden_dim
  Tensor2D hidden_bias{0, 0};   // 1 x hidden_dim
  Tensor2D fix_weight{0, 0};    // hidden_dim x kNumFixTypes
  Tensor2D fix_bias{0, 0};      // 1 x kNumFixTypes
  Tensor2D tag_weight{0, 0};    // hidden_dim x kNumReasoningTags
  Tensor2D tag_bias{0, 0};      // 1 x kNumReasoningTags

  NamedTensors named_parameters();
  std::vector<std::pair<std::string, const Tensor2D*>> named_parameters() const;
  std::size_t parameter_count() const;

  bool operator==(const StudentModel&) const = default;
};

/// Weights drawn uniformly from the open interval (-0.05, 0.05), biases
/// zero. Fill order is the named-parameter order, row-major within each
/// tensor, so a seed pins every byte.
StudentModel init_student(const StudentConfig& config, std::uint64_t seed);

struct Prediction {
  std::vector<double> fix_probs;  // kNumFixTypes, sums to ~1
  std::vector<double> tag_probs;  // kNumReasoningTags, independent sigmoids
  int predicted_fix = 0;          // argmax, lowest index on ties
  ReasoningTrace predicted_trace; // tags with prob > threshold, enum order

  bool operator==(const Prediction&) const = default;
};

Prediction student_forward(const StudentModel& model, const TokenSequence& input);

/// Scalar losses over a finished Prediction, used for reporting and for
/// cross-checking the differentiable path.
double loss_label_only(const Prediction& pred, FixType gold);
double loss_joint(const Prediction& pred, FixType gold, const ReasoningTrace& gold_trace,
                  double lambda);

/// Parameters lifted onto a tape once per batch; every example in the batch
/// reuses the same leaf vars so gradients accumulate.
struct StudentParamVars {
  Tape::Var embedding, hidden_weight, hidden_bias;
  Tape::Var fix_weight, fix_bias, tag_weight, tag_bias;

  std::vector<Tape::Var> ordered() const;
};

StudentParamVars lift_student(Tape& tape, const StudentModel& model);

/// Differentiable per-example loss. Passing a gold trace builds the joint
/// objective CE + lambda * mean-BCE; passing nullptr builds plain CE.
Tape::Var student_example_loss(Tape& tape, const StudentParamVars& params,
                               const StudentConfig& config, const TokenSequence& input,
                               FixType gold, const ReasoningTrace* gold_trace, double lambda);

} // namespace fixlab
