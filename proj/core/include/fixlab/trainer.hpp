#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fixlab/corpus.hpp"
#include "fixlab/metrics.hpp"
#include "fixlab/optim.hpp"
#include "fixlab/rng.hpp"
#include "fixlab/student.hpp"

namespace fixlab {

struct TrainConfig {
  Variant variant = Variant::LabelOnly;
  std::size_t epochs = 40;
  std::size_t batch_size = 16;
  double learning_rate = 1e-3;
  double lambda_reason = 1.0;
  std::uint64_t seed = 1;
  std::size_t embed_dim = 16;
  std::size_t hidden_dim = 32;
  std::size_t max_len = 256;
  std::size_t min_count = 1;
  double tag_threshold = 0.5;

  bool operator==(const TrainConfig&) const = default;
};

/// Names of the fields on which two configs differ.
std::vector<std::string> config_delta(const TrainConfig& a, const TrainConfig& b);

struct EpochLog {
  std::size_t epoch = 0; // 1-based
  double train_loss = 0.0;
  std::optional<double> val_accuracy;     // absent without a validation split
  std::optional<double> val_macro_f1;
  std::optional<double> val_tag_micro_f1; // distilled only
  std::optional<double> val_exact_match;  // distilled only

  std::string to_json() const;
  bool operator==(const EpochLog&) const = default;
};

struct TrainResult {
  StudentModel model;
  Vocabulary vocab;
  std::vector<EpochLog> log;
  AdamState adam;
  SeededRng::State shuffle_state; // RNG position after the last epoch
  std::size_t epochs_done = 0;
};

/// Resume point for continuing an interrupted run; see checkpoint.hpp for
/// the serialized form.
struct TrainResume {
  StudentModel model;
  Vocabulary vocab;
  AdamState adam;
  SeededRng::State shuffle_state;
  std::size_t epochs_done = 0;
};

/// Trains a student on the dataset's train split and scores each epoch on
/// the validation split. The teacher's fix type and trace are the training
/// targets; corpus gold labels are only used for validation metrics.
/// Throws EmptyTrainSplit when no train examples exist and
/// UnsupervisedExample when a train example (or, for the distilled variant,
/// a validation example) lacks valid supervision.
TrainResult train_student(const Dataset& dataset, const TrainConfig& config,
                          const TrainResume* resume = nullptr);

struct PairedRun {
  std::uint64_t seed = 0;
  Variant variant = Variant::LabelOnly;
  EvalReport report; // validation split
  std::vector<EpochLog> log;

  bool operator==(const PairedRun&) const = default;
};

struct PairedSummary {
  std::size_t num_seeds = 0;
  double label_only_accuracy_mean = 0.0;
  double distilled_accuracy_mean = 0.0;
  double label_only_macro_f1_mean = 0.0;
  double distilled_macro_f1_mean = 0.0;
  double macro_f1_delta_mean = 0.0; // distilled minus label-only
  std::size_t distilled_wins = 0;   // seeds where the delta is positive

  bool operator==(const PairedSummary&) const = default;
};

struct PairedExperimentResult {
  std::vector<PairedRun> runs; // label-only then distilled, per seed
  PairedSummary summary;

  std::string to_json() const;
  std::string render_text() const;
  bool operator==(const PairedExperimentResult&) const = default;
};

/// For every seed, trains both variants from identical data, init seed, and
/// schedule; only `variant`/`lambda_reason` may differ between the two
/// configs (enforced via config_delta). Throws ConfigError when the isolation
/// check fails or no seeds are given.
PairedExperimentResult run_paired_experiment(const Dataset& dataset, const TrainConfig& base,
                                             const std::vector<std::uint64_t>& seeds,
                                             const EvalOptions& options = {});

} // namespace fixlab
