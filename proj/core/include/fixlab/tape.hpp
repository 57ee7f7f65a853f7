#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "fixlab/tensor.hpp"

namespace fixlab {

/// Eager reverse-mode autodiff over Tensor2D. Operations execute
/// immediately and record a backward closure; `backward` replays the
/// closures in reverse order. One tape per training step.
///
/// Every op validates operand shapes (ShapeMismatch) and the finiteness
/// of its result (NonFinite). Accumulation orders are fixed, so identical
/// graphs produce bit-identical gradients.
class Tape {
public:
  struct Var {
    std::size_t id = static_cast<std::size_t>(-1);
    bool valid() const { return id != static_cast<std::size_t>(-1); }
  };

  /// Gradient-tracked input (parameters, activations fed from outside).
  Var leaf(const Tensor2D& value);

  /// Input that never receives a gradient (masks, constants).
  Var constant(const Tensor2D& value);

  /// Gathers rows of `table` at `ids`; result is ids.size() x table.cols.
  Var embedding_lookup(Var table, std::span<const int> ids);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);          // elementwise, same shape
  Var mul(Var a, Var b);          // elementwise, same shape
  Var add_bias(Var x, Var bias);  // bias is 1 x cols, broadcast over rows
  Var relu(Var x);
  Var sigmoid(Var x);
  Var softmax_rows(Var x);
  Var scale(Var x, double factor);
  Var sum_all(Var x);             // 1 x 1

  /// Mean over the first `valid_rows` rows (the non-PAD positions).
  Var mean_pool_rows(Var x, std::size_t valid_rows);

  /// -log softmax(logits)[gold]; logits is 1 x k. Stable for |logit| <= 700.
  Var softmax_cross_entropy(Var logits, std::size_t gold_index);

  /// Mean over positions of binary cross-entropy between sigmoid(logits)
  /// and targets; logits is 1 x t, targets.size() == t. Computed from the
  /// logits directly so it stays finite for large magnitudes.
  Var sigmoid_bce_mean(Var logits, std::vector<double> targets);

  const Tensor2D& value(Var v) const;
  const Tensor2D& grad(Var v) const;

  /// Seeds d(loss) = 1 and propagates to every leaf. `loss` must be a
  /// 1 x 1 node on this tape; throws GraphNotEvaluated otherwise.
  void backward(Var loss);

  std::size_t node_count() const { return nodes_.size(); }

private:
  struct Node {
    Tensor2D value;
    Tensor2D grad;
    bool tracked = true;
    std::function<void(Tape&, std::size_t)> backprop; // empty for leaves
  };

  Var push(Tensor2D value, bool tracked, std::function<void(Tape&, std::size_t)> backprop,
           const char* op_name);
  Node& node(Var v);
  const Node& node(Var v) const;

  std::vector<Node> nodes_;
};

} // namespace fixlab
