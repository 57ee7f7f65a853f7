#include "fixlab/optim.hpp"

#include <cmath>

#include "fixlab/error.hpp"

namespace fixlab {

void AdamState::step(const NamedTensors& params, const std::vector<const Tensor2D*>& grads) {
  require_shape(params.size() == grads.size(), "adam: parameter/gradient count mismatch");
  if (m_.empty()) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const auto& [name, tensor] : params) {
      m_.emplace_back(tensor->rows, tensor->cols, 0.0);
      v_.emplace_back(tensor->rows, tensor->cols, 0.0);
    }
  }
  require_shape(m_.size() == params.size(), "adam: state was built for a different model");

  ++step_count_;
  const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
  const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));

  for (std::size_t p = 0; p < params.size(); ++p) {
    Tensor2D& param = *params[p].second;
    const Tensor2D& grad = *grads[p];
    require_shape(param.same_shape(grad),
                  "adam: gradient shape differs from parameter " + params[p].first);
    require_shape(param.same_shape(m_[p]),
                  "adam: moment shape differs from parameter " + params[p].first);
    for (std::size_t i = 0; i < param.data.size(); ++i) {
      const double g = grad.data[i];
      m_[p].data[i] = config_.beta1 * m_[p].data[i] + (1.0 - config_.beta1) * g;
      v_[p].data[i] = config_.beta2 * v_[p].data[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m_[p].data[i] / bias1;
      const double v_hat = v_[p].data[i] / bias2;
      param.data[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
    check_finite(param, "adam_step(" + params[p].first + ")");
  }
}

void AdamState::restore(std::int64_t step_count, std::vector<Tensor2D> m,
                        std::vector<Tensor2D> v) {
  require_shape(m.size() == v.size(), "adam restore: moment vectors disagree");
  step_count_ = step_count;
  m_ = std::move(m);
  v_ = std::move(v);
}

} // namespace fixlab
