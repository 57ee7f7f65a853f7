#include "fixlab/tape.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "fixlab/error.hpp"

namespace fixlab {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// softplus(x) = log(1 + e^x) without overflow.
double softplus(double x) {
  if (x > 0.0) {
    return x + std::log1p(std::exp(-x));
  }
  return std::log1p(std::exp(x));
}

} // namespace

Tape::Var Tape::push(Tensor2D value, bool tracked,
                     std::function<void(Tape&, std::size_t)> backprop, const char* op_name) {
  check_finite(value, op_name);
  Node n;
  n.grad = Tensor2D(value.rows, value.cols, 0.0);
  n.value = std::move(value);
  n.tracked = tracked;
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

Tape::Node& Tape::node(Var v) {
  if (!v.valid() || v.id >= nodes_.size()) {
    raise(ErrorCode::GraphNotEvaluated, "variable does not belong to this tape");
  }
  return nodes_[v.id];
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || v.id >= nodes_.size()) {
    raise(ErrorCode::GraphNotEvaluated, "variable does not belong to this tape");
  }
  return nodes_[v.id];
}

Tape::Var Tape::leaf(const Tensor2D& value) {
  return push(value, true, nullptr, "leaf");
}

Tape::Var Tape::constant(const Tensor2D& value) {
  return push(value, false, nullptr, "constant");
}

Tape::Var Tape::embedding_lookup(Var table, std::span<const int> ids) {
  const Tensor2D& t = node(table).value;
  Tensor2D out(ids.size(), t.cols);
  std::vector<int> captured(ids.begin(), ids.end());
  for (std::size_t p = 0; p < captured.size(); ++p) {
    const int id = captured[p];
    require_shape(id >= 0 && static_cast<std::size_t>(id) < t.rows,
                  "embedding_lookup: id " + std::to_string(id) + " out of range");
    for (std::size_t c = 0; c < t.cols; ++c) {
      out.at(p, c) = t.at(static_cast<std::size_t>(id), c);
    }
  }
  const std::size_t table_id = table.id;
  return push(std::move(out), true,
              [table_id, captured = std::move(captured)](Tape& tape, std::size_t self) {
                Node& parent = tape.nodes_[table_id];
                const Node& me = tape.nodes_[self];
                for (std::size_t p = 0; p < captured.size(); ++p) {
                  const auto row = static_cast<std::size_t>(captured[p]);
                  for (std::size_t c = 0; c < parent.value.cols; ++c) {
                    parent.grad.at(row, c) += me.grad.at(p, c);
                  }
                }
              },
              "embedding_lookup");
}

Tape::Var Tape::matmul(Var a, Var b) {
  const Tensor2D& av = node(a).value;
  const Tensor2D& bv = node(b).value;
  require_shape(av.cols == bv.rows, "matmul: inner dimensions disagree");
  Tensor2D out(av.rows, bv.cols);
  for (std::size_t i = 0; i < av.rows; ++i) {
    for (std::size_t k = 0; k < av.cols; ++k) {
      const double aik = av.at(i, k);
      for (std::size_t j = 0; j < bv.cols; ++j) {
        out.at(i, j) += aik * bv.at(k, j);
      }
    }
  }
  const std::size_t ai = a.id, bi = b.id;
  return push(std::move(out), true,
              [ai, bi](Tape& tape, std::size_t self) {
                Node& na = tape.nodes_[ai];
                Node& nb = tape.nodes_[bi];
                const Node& me = tape.nodes_[self];
                // dA = dC * B^T
                for (std::size_t i = 0; i < na.value.rows; ++i) {
                  for (std::size_t k = 0; k < na.value.cols; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < nb.value.cols; ++j) {
                      acc += me.grad.at(i, j) * nb.value.at(k, j);
                    }
                    na.grad.at(i, k) += acc;
                  }
                }
                // dB = A^T * dC
                for (std::size_t k = 0; k < nb.value.rows; ++k) {
                  for (std::size_t j = 0; j < nb.value.cols; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < na.value.rows; ++i) {
                      acc += na.value.at(i, k) * me.grad.at(i, j);
                    }
                    nb.grad.at(k, j) += acc;
                  }
                }
              },
              "matmul");
}

Tape::Var Tape::add(Var a, Var b) {
  const Tensor2D& av = node(a).value;
  const Tensor2D& bv = node(b).value;
  require_shape(av.same_shape(bv), "add: shapes differ");
  Tensor2D out = av;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] += bv.data[i];
  }
  const std::size_t ai = a.id, bi = b.id;
  return push(std::move(out), true,
              [ai, bi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& na = tape.nodes_[ai];
                Node& nb = tape.nodes_[bi];
                for (std::size_t i = 0; i < me.grad.data.size(); ++i) {
                  na.grad.data[i] += me.grad.data[i];
                  nb.grad.data[i] += me.grad.data[i];
                }
              },
              "add");
}

Tape::Var Tape::mul(Var a, Var b) {
  const Tensor2D& av = node(a).value;
  const Tensor2D& bv = node(b).value;
  require_shape(av.same_shape(bv), "mul: shapes differ");
  Tensor2D out = av;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] *= bv.data[i];
  }
  const std::size_t ai = a.id, bi = b.id;
  return push(std::move(out), true,
              [ai, bi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& na = tape.nodes_[ai];
                Node& nb = tape.nodes_[bi];
                for (std::size_t i = 0; i < me.grad.data.size(); ++i) {
                  na.grad.data[i] += me.grad.data[i] * nb.value.data[i];
                  nb.grad.data[i] += me.grad.data[i] * na.value.data[i];
                }
              },
              "mul");
}

Tape::Var Tape::add_bias(Var x, Var bias) {
  const Tensor2D& xv = node(x).value;
  const Tensor2D& bv = node(bias).value;
  require_shape(bv.rows == 1 && bv.cols == xv.cols, "add_bias: bias must be 1 x cols");
  Tensor2D out = xv;
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) += bv.at(0, c);
    }
  }
  const std::size_t xi = x.id, bi = bias.id;
  return push(std::move(out), true,
              [xi, bi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                Node& nb = tape.nodes_[bi];
                for (std::size_t r = 0; r < me.grad.rows; ++r) {
                  for (std::size_t c = 0; c < me.grad.cols; ++c) {
                    nx.grad.at(r, c) += me.grad.at(r, c);
                    nb.grad.at(0, c) += me.grad.at(r, c);
                  }
                }
              },
              "add_bias");
}

Tape::Var Tape::relu(Var x) {
  const Tensor2D& xv = node(x).value;
  Tensor2D out = xv;
  for (double& v : out.data) {
    if (v < 0.0) v = 0.0;
  }
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (std::size_t i = 0; i < me.grad.data.size(); ++i) {
                  if (nx.value.data[i] > 0.0) {
                    nx.grad.data[i] += me.grad.data[i];
                  }
                }
              },
              "relu");
}

Tape::Var Tape::sigmoid(Var x) {
  const Tensor2D& xv = node(x).value;
  Tensor2D out = xv;
  for (double& v : out.data) {
    v = stable_sigmoid(v);
  }
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (std::size_t i = 0; i < me.grad.data.size(); ++i) {
                  const double y = me.value.data[i];
                  nx.grad.data[i] += me.grad.data[i] * y * (1.0 - y);
                }
              },
              "sigmoid");
}

Tape::Var Tape::softmax_rows(Var x) {
  const Tensor2D& xv = node(x).value;
  Tensor2D out = xv;
  for (std::size_t r = 0; r < out.rows; ++r) {
    double max = out.at(r, 0);
    for (std::size_t c = 1; c < out.cols; ++c) {
      max = std::max(max, out.at(r, c));
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) = std::exp(out.at(r, c) - max);
      sum += out.at(r, c);
    }
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) /= sum;
    }
  }
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (std::size_t r = 0; r < me.value.rows; ++r) {
                  double dot = 0.0;
                  for (std::size_t c = 0; c < me.value.cols; ++c) {
                    dot += me.grad.at(r, c) * me.value.at(r, c);
                  }
                  for (std::size_t c = 0; c < me.value.cols; ++c) {
                    nx.grad.at(r, c) += me.value.at(r, c) * (me.grad.at(r, c) - dot);
                  }
                }
              },
              "softmax_rows");
}

Tape::Var Tape::scale(Var x, double factor) {
  const Tensor2D& xv = node(x).value;
  Tensor2D out = xv;
  for (double& v : out.data) {
    v *= factor;
  }
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi, factor](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (std::size_t i = 0; i < me.grad.data.size(); ++i) {
                  nx.grad.data[i] += factor * me.grad.data[i];
                }
              },
              "scale");
}

Tape::Var Tape::sum_all(Var x) {
  const Tensor2D& xv = node(x).value;
  double total = 0.0;
  for (double v : xv.data) {
    total += v;
  }
  Tensor2D out(1, 1, total);
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (double& g : nx.grad.data) {
                  g += me.grad.at(0, 0);
                }
              },
              "sum_all");
}

Tape::Var Tape::mean_pool_rows(Var x, std::size_t valid_rows) {
  const Tensor2D& xv = node(x).value;
  require_shape(valid_rows >= 1 && valid_rows <= xv.rows,
                "mean_pool_rows: valid_rows out of range");
  Tensor2D out(1, xv.cols);
  for (std::size_t r = 0; r < valid_rows; ++r) {
    for (std::size_t c = 0; c < xv.cols; ++c) {
      out.at(0, c) += xv.at(r, c);
    }
  }
  const double inv = 1.0 / static_cast<double>(valid_rows);
  for (double& v : out.data) {
    v *= inv;
  }
  const std::size_t xi = x.id;
  return push(std::move(out), true,
              [xi, valid_rows, inv](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nx = tape.nodes_[xi];
                for (std::size_t r = 0; r < valid_rows; ++r) {
                  for (std::size_t c = 0; c < me.grad.cols; ++c) {
                    nx.grad.at(r, c) += me.grad.at(0, c) * inv;
                  }
                }
              },
              "mean_pool_rows");
}

Tape::Var Tape::softmax_cross_entropy(Var logits, std::size_t gold_index) {
  const Tensor2D& z = node(logits).value;
  require_shape(z.rows == 1 && gold_index < z.cols,
                "softmax_cross_entropy: logits must be 1 x k with gold < k");
  double max = z.at(0, 0);
  for (std::size_t c = 1; c < z.cols; ++c) {
    max = std::max(max, z.at(0, c));
  }
  double sum = 0.0;
  std::vector<double> probs(z.cols);
  for (std::size_t c = 0; c < z.cols; ++c) {
    probs[c] = std::exp(z.at(0, c) - max);
    sum += probs[c];
  }
  for (double& p : probs) {
    p /= sum;
  }
  const double loss = std::log(sum) + max - z.at(0, gold_index);
  const std::size_t zi = logits.id;
  return push(Tensor2D(1, 1, loss), true,
              [zi, gold_index, probs = std::move(probs)](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nz = tape.nodes_[zi];
                const double upstream = me.grad.at(0, 0);
                for (std::size_t c = 0; c < nz.value.cols; ++c) {
                  const double onehot = (c == gold_index) ? 1.0 : 0.0;
                  nz.grad.at(0, c) += upstream * (probs[c] - onehot);
                }
              },
              "softmax_cross_entropy");
}

Tape::Var Tape::sigmoid_bce_mean(Var logits, std::vector<double> targets) {
  const Tensor2D& z = node(logits).value;
  require_shape(z.rows == 1 && z.cols == targets.size(),
                "sigmoid_bce_mean: logits must be 1 x targets.size()");
  double total = 0.0;
  for (std::size_t c = 0; c < z.cols; ++c) {
    // softplus(z) - z*y == -[y log s + (1-y) log (1-s)]
    total += softplus(z.at(0, c)) - z.at(0, c) * targets[c];
  }
  const double inv = 1.0 / static_cast<double>(z.cols);
  const std::size_t zi = logits.id;
  return push(Tensor2D(1, 1, total * inv), true,
              [zi, inv, targets = std::move(targets)](Tape& tape, std::size_t self) {
                const Node& me = tape.nodes_[self];
                Node& nz = tape.nodes_[zi];
                const double upstream = me.grad.at(0, 0) * inv;
                for (std::size_t c = 0; c < nz.value.cols; ++c) {
                  nz.grad.at(0, c) +=
                      upstream * (stable_sigmoid(nz.value.at(0, c)) - targets[c]);
                }
              },
              "sigmoid_bce_mean");
}

const Tensor2D& Tape::value(Var v) const {
  return node(v).value;
}

const Tensor2D& Tape::grad(Var v) const {
  return node(v).grad;
}

void Tape::backward(Var loss) {
  if (nodes_.empty() || !loss.valid() || loss.id >= nodes_.size()) {
    raise(ErrorCode::GraphNotEvaluated, "backward called before any forward op");
  }
  Node& top = nodes_[loss.id];
  require_shape(top.value.rows == 1 && top.value.cols == 1, "backward: loss must be 1 x 1");
  top.grad.at(0, 0) = 1.0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.tracked && n.backprop) {
      n.backprop(*this, i);
    }
  }
}

} // namespace fixlab
