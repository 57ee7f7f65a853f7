#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fixlab/corpus.hpp"
#include "fixlab/encode.hpp"
#include "fixlab/taxonomy.hpp"
#include "fixlab/tensor.hpp"
#include "fixlab/trainer.hpp"

namespace fixlab {

// ---------------------------------------------------------------------------
// Unified diffs (single-hunk subset)

/// Line-based unified diff of `before` -> `after` with up to `context`
/// unchanged lines on each side of the change. Headers are fixed
/// ("--- buggy.c" / "+++ fixed.c"). Equal inputs yield the empty string.
/// The edits this corpus produces are always one contiguous line span, so a
/// single hunk is exact, not an approximation.
std::string make_unified_diff(const std::string& before, const std::string& after,
                              std::size_t context = 3);

/// Applies a single-hunk unified diff at its stated line numbers. Context
/// and deletion lines must match the source exactly; there is no fuzzy
/// search. An empty diff returns the source unchanged. Throws MalformedDiff
/// on anything that is not the single-hunk format and ContextMismatch when
/// the hunk does not fit the source.
std::string apply_patch(const std::string& source, const std::string& diff);

// ---------------------------------------------------------------------------
// Teacher-side JSON targets

struct JsonTarget {
  FixType defect_class = FixType::WRONG_CONDITION;
  std::string patch;       // unified diff, buggy -> reference
  std::string explanation; // short templated text

  bool operator==(const JsonTarget&) const = default;
};

/// Compact canonical JSON with fixed key order
/// {"defect_class":...,"patch":...,"explanation":...}.
std::string serialize_json_target(const JsonTarget& target);

/// Builds the supervision target for one example: the gold class, the
/// minimal diff onto the reference, and a one-line explanation keyed by the
/// fix type and its edit-site kind. Throws MissingProvenance when the
/// example carries no edit record.
JsonTarget make_json_target(const Example& example);

/// A decoder output that parsed as a JSON object with exactly the three
/// required string keys. `defect_class` is kept as raw text because the
/// model is free to emit a string that names no real fix type.
struct ParsedTarget {
  std::string defect_class;
  std::string patch;
  std::string explanation;

  bool operator==(const ParsedTarget&) const = default;
};

/// std::nullopt when `text` is not valid JSON or lacks the exact key set.
std::optional<ParsedTarget> parse_structured_output(const std::string& text);

// ---------------------------------------------------------------------------
// Output-side tokenization

/// Lossless segmentation: runs of letters/underscores, runs of digits, and
/// every other byte as its own token. Concatenating the tokens restores the
/// input exactly, which is what lets decoded token streams be re-parsed as
/// JSON.
std::vector<std::string> segment_text(const std::string& text);

/// Token-to-id map for the decoder's output side. Ids 0..3 are reserved
/// (PAD, BOS, EOS, UNK); real tokens start at id 4 in
/// frequency-then-lexicographic order.
class OutputVocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kBosId = 1;
  static constexpr int kEosId = 2;
  static constexpr int kUnkId = 3;
  static constexpr std::size_t kNumReservedIds = 4;

  OutputVocabulary() = default;
  explicit OutputVocabulary(std::vector<std::string> tokens);

  int id(const std::string& token) const; // kUnkId for unknown tokens
  const std::string& token(int id) const; // real ids only
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return kNumReservedIds + tokens_.size(); }

  bool operator==(const OutputVocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

/// Segments every target string and keeps tokens with count >= min_count,
/// ordered by descending frequency then ascending lexicographic.
OutputVocabulary build_output_vocab(const std::vector<std::string>& targets,
                                    std::size_t min_count = 1);

// ---------------------------------------------------------------------------
// Decoder model

struct DecoderConfig {
  std::size_t embed_dim = 16;      // encoder token embedding
  std::size_t hidden_dim = 32;     // encoder pool size == recurrent state size
  std::size_t max_len = 256;       // input sequence length
  std::size_t out_embed_dim = 16;  // output token embedding
  std::size_t max_output_len = 512;
  std::size_t epochs = 30;
  double learning_rate = 1e-3;
  std::uint64_t seed = 1;
  std::size_t min_count = 1;

  bool operator==(const DecoderConfig&) const = default;
};

/// Mean-pooled encoder (same shape as the classification student's) feeding
/// a single-layer recurrent decoder over the output vocabulary:
///   s_0 = pooled encoder state
///   s_t = relu(embed(y_{t-1}) * Wxh + s_{t-1} * Whh + b)
///   logits_t = s_t * Wout + bout
struct DecoderModel {
  DecoderConfig config;
  Vocabulary input_vocab;
  OutputVocabulary output_vocab;

  Tensor2D enc_embedding{0, 0};    // input_vocab x embed_dim
  Tensor2D enc_hidden_weight{0, 0}; // embed_dim x hidden_dim
  Tensor2D enc_hidden_bias{0, 0};  // 1 x hidden_dim
  Tensor2D out_embedding{0, 0};    // output_vocab x out_embed_dim
  Tensor2D xh_weight{0, 0};        // out_embed_dim x hidden_dim
  Tensor2D hh_weight{0, 0};        // hidden_dim x hidden_dim
  Tensor2D state_bias{0, 0};       // 1 x hidden_dim
  Tensor2D out_weight{0, 0};       // hidden_dim x output_vocab
  Tensor2D out_bias{0, 0};         // 1 x output_vocab

  NamedTensors named_parameters();
  std::vector<std::pair<std::string, const Tensor2D*>> named_parameters() const;
  std::size_t parameter_count() const;

  /// Full serialized form (config, vocabularies, parameters); bit-stable
  /// given identical training inputs.
  std::string to_json() const;

  bool operator==(const DecoderModel&) const = default;
};

struct DecoderTrainResult {
  DecoderModel model;
  std::vector<double> epoch_losses; // mean per-example loss, one per epoch
};

/// Trains the decoder on the dataset's train split with teacher forcing over
/// serialized JsonTargets. Throws EmptyTrainSplit when the split is empty,
/// MissingProvenance when a train example has no edit record, and ConfigError
/// on degenerate dimensions.
DecoderTrainResult train_decoder(const Dataset& dataset, const DecoderConfig& config);

/// Greedy decode, bounded by config.max_output_len; returns the concatenated
/// surface text of the emitted tokens (UNK contributes nothing).
std::string decode_structured(const DecoderModel& model, const Example& example);

// ---------------------------------------------------------------------------
// Evaluation (Table 5 shape)

struct StructuredEvalOptions {
  /// Score the defect micro F1 over every example (invalid outputs counting
  /// as misses) instead of over valid-JSON outputs only.
  bool micro_over_all = false;

  bool operator==(const StructuredEvalOptions&) const = default;
};

struct StructuredEval {
  std::size_t num_examples = 0;
  std::size_t num_valid = 0;        // outputs that parsed with the right keys
  double json_validity = 0.0;       // num_valid / num_examples
  double defect_exact_match = 0.0;  // over all examples
  double defect_micro_f1 = 0.0;     // over valid outputs unless micro_over_all
  double patch_apply_rate = 0.0;    // over valid outputs; 0 when none

  bool operator==(const StructuredEval&) const = default;
};

/// Decodes every listed example and scores the four structured metrics.
/// Throws EmptySplit when `indices` is empty.
StructuredEval evaluate_structured(const DecoderModel& model, const Dataset& dataset,
                                   const std::vector<std::size_t>& indices,
                                   const StructuredEvalOptions& options = {});

// ---------------------------------------------------------------------------
// Study orchestration

/// Index partition for this module's local train/validation/test view.
struct ThreeWaySplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;

  bool operator==(const ThreeWaySplit&) const = default;
};

/// Seeded-permutation 70/15/15 partition (validation and test sizes round to
/// nearest). Throws ConfigError when the fractions are degenerate or any
/// piece would be empty.
ThreeWaySplit split_three_way(const Dataset& dataset, std::uint64_t seed,
                              double val_fraction = 0.15, double test_fraction = 0.15);

struct StructuredStudyConfig {
  DecoderConfig decoder;
  /// The comparison arm: a classification student trained on the identical
  /// subsample. Distilled by default, since that is the stronger baseline.
  TrainConfig classifier = {.variant = Variant::ReasoningDistilled};
  std::size_t subsample = 74; // train examples kept for both arms; 0 = all
  std::uint64_t seed = 1;     // split + subsample draws
  StructuredEvalOptions eval;

  bool operator==(const StructuredStudyConfig&) const = default;
};

struct StructuredStudyResult {
  StructuredStudyConfig config;
  std::size_t train_size = 0; // after subsampling
  StructuredEval validation;
  StructuredEval test;
  double classifier_val_accuracy = 0.0;  // same validation examples
  double classifier_test_accuracy = 0.0; // same test examples
  std::vector<double> decoder_epoch_losses;

  std::string to_json() const;
  std::string render_text() const;
};

/// The low-data structured-output study: re-splits the corpus 70/15/15,
/// subsamples the train side, trains the JSON decoder and a classification
/// student on the identical subsample, and scores both on the identical
/// held-out examples. Examples lacking valid supervision get oracle
/// supervision derived from their provenance, so a freshly injected corpus
/// works directly.
StructuredStudyResult run_structured_study(const Dataset& dataset,
                                           const StructuredStudyConfig& config);

} // namespace fixlab
