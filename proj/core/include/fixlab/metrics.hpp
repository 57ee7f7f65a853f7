#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "fixlab/corpus.hpp"
#include "fixlab/student.hpp"

namespace fixlab {

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes = kNumFixTypes);

  void add(std::size_t gold, std::size_t predicted);
  std::size_t at(std::size_t gold, std::size_t predicted) const;
  std::size_t num_classes() const { return classes_; }
  std::size_t total() const { return total_; }
  std::size_t gold_count(std::size_t c) const;
  std::size_t predicted_count(std::size_t c) const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t classes_;
  std::size_t total_ = 0;
  std::vector<std::size_t> counts_; // row-major, gold x predicted
};

/// Diagonal mass over total. Throws EmptyInput on an empty matrix.
double accuracy(const ConfusionMatrix& matrix);

/// Per-class F1 = 2PR/(P+R), defined as 0 whenever P+R is 0.
std::vector<double> per_class_f1(const ConfusionMatrix& matrix);

/// Mean of per-class F1. With include_absent=false, classes that have no
/// gold examples are left out of the average instead of contributing 0.
double macro_f1(const ConfusionMatrix& matrix, bool include_absent = true);

struct TagScores {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::array<double, kNumReasoningTags> per_tag_accuracy{};

  bool operator==(const TagScores&) const = default;
};

/// Tag-level scores over per-example trace sets. Micro F1 pools TP/FP/FN
/// across all tags (defined as 1 when all three are 0); macro averages
/// per-tag F1 over the full tag vocabulary.
TagScores score_tags(const std::vector<ReasoningTrace>& predicted,
                     const std::vector<ReasoningTrace>& gold);

/// Fraction of examples whose predicted trace equals the gold trace. The
/// default compares ordered sequences; set_semantics compares sorted,
/// deduplicated tag sets.
double exact_match(const std::vector<ReasoningTrace>& predicted,
                   const std::vector<ReasoningTrace>& gold, bool set_semantics = false);

struct ConditionalAccuracy {
  std::optional<double> given_correct_trace;   // empty when the slice is empty
  std::optional<double> given_incorrect_trace;
  std::size_t correct_trace_count = 0;
  std::size_t incorrect_trace_count = 0;

  bool operator==(const ConditionalAccuracy&) const = default;
};

/// Fix-type accuracy partitioned by whether the predicted trace matched the
/// gold trace. Throws NoTraceOutputs for the label-only variant, whose tag
/// head is untrained noise.
ConditionalAccuracy conditional_accuracy(Variant variant, const std::vector<Prediction>& preds,
                                         const std::vector<FixType>& gold_fixes,
                                         const std::vector<ReasoningTrace>& gold_traces,
                                         bool set_semantics = false);

struct EvalOptions {
  bool macro_include_absent = true;
  bool trace_set_semantics = false;

  bool operator==(const EvalOptions&) const = default;
};

struct TagMetrics {
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::array<double, kNumReasoningTags> per_tag_accuracy{};
  double exact_match = 0.0;

  bool operator==(const TagMetrics&) const = default;
};

struct EvalReport {
  std::size_t num_examples = 0;
  Variant variant = Variant::LabelOnly;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> per_class_f1; // kNumFixTypes entries
  std::optional<TagMetrics> tags;             // distilled only
  std::optional<ConditionalAccuracy> conditional; // distilled only

  std::string to_json() const;
  std::string render_text() const;

  bool operator==(const EvalReport&) const = default;
};

/// Scores a model over one split of a dataset. Gold fix types come from the
/// corpus labels; gold traces come from the attached supervision, which the
/// distilled variant requires on every scored example. Throws EmptySplit
/// when the split has no examples.
EvalReport evaluate(const StudentModel& model, const Vocabulary& vocab, const Dataset& dataset,
                    Split split, const EvalOptions& options = {});

} // namespace fixlab
