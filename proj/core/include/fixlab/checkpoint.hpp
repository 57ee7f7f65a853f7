#pragma once

#include <filesystem>
#include <optional>

#include "fixlab/encode.hpp"
#include "fixlab/optim.hpp"
#include "fixlab/rng.hpp"
#include "fixlab/student.hpp"
#include "fixlab/trainer.hpp"

namespace fixlab {

/// Everything needed to score a model or continue its training run. The
/// optimizer, vocabulary, and RNG blocks are optional: a checkpoint written
/// purely for inference can omit them.
struct Checkpoint {
  StudentModel model;
  std::optional<AdamState> adam;
  std::optional<Vocabulary> vocab;
  std::optional<SeededRng::State> shuffle_state;
  std::size_t epochs_done = 0;
};

/// JSON with full-fidelity doubles (shortest round-trip form), so
/// save -> load -> save is byte-stable and the reloaded model is
/// bit-identical.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// View of a checkpoint as a train_student resume point. Throws ConfigError
/// when the checkpoint lacks the optimizer, vocabulary, or RNG blocks.
TrainResume as_resume(const Checkpoint& checkpoint);

/// Checkpoint written at the end of a training run.
Checkpoint make_checkpoint(const TrainResult& result);

} // namespace fixlab
