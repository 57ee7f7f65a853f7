#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fixlab {

/// Deterministic random source used everywhere a seed appears in the
/// pipeline. The core generator is splitmix64 (pure 64-bit integer
/// arithmetic with wrapping overflow), so integer streams are identical
/// on every platform; floating-point draws are derived from the integer
/// stream by a fixed recipe.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  /// Uniform draw in [0, 1) with 53 bits of mantissa.
  double uniform();

  /// Standard normal draw via Box-Muller; pairs are cached.
  double normal();

  /// Uniform integer in [0, n). Rejection-sampled, so the result is
  /// unbiased for every n. Requires n > 0.
  std::size_t below(std::size_t n);

  /// Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);

  /// Complete generator state, for checkpointing mid-stream.
  struct State {
    std::uint64_t counter = 0;
    bool have_spare = false;
    double spare = 0.0;

    bool operator==(const State&) const = default;
  };

  State state() const { return {state_, have_spare_, spare_}; }
  void set_state(const State& s) {
    state_ = s.counter;
    have_spare_ = s.have_spare;
    spare_ = s.spare;
  }

private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace fixlab
