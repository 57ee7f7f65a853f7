#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fixlab/tensor.hpp"

namespace fixlab {

/// Named views of a model's parameter tensors, in a fixed order. The order
/// keys the optimizer's moment slots and the checkpoint layout.
using NamedTensors = std::vector<std::pair<std::string, Tensor2D*>>;

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Canonical Adam with bias correction. Moments are allocated on first
/// step and keyed by position, so the caller must pass parameters in the
/// same order every time.
class AdamState {
public:
  explicit AdamState(AdamConfig config) : config_(config) {}

  void step(const NamedTensors& params, const std::vector<const Tensor2D*>& grads);

  std::int64_t step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }

  // Checkpoint access.
  const std::vector<Tensor2D>& first_moments() const { return m_; }
  const std::vector<Tensor2D>& second_moments() const { return v_; }
  void restore(std::int64_t step_count, std::vector<Tensor2D> m, std::vector<Tensor2D> v);

private:
  AdamConfig config_;
  std::int64_t step_count_ = 0;
  std::vector<Tensor2D> m_;
  std::vector<Tensor2D> v_;
};

} // namespace fixlab
