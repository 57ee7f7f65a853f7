#include "fixlab/tensor.hpp"

#include <cmath>

#include "fixlab/error.hpp"

namespace fixlab {

Tensor2D Tensor2D::from_rows(std::initializer_list<std::initializer_list<double>> values) {
  Tensor2D t;
  t.rows = values.size();
  t.cols = values.size() == 0 ? 0 : values.begin()->size();
  t.data.reserve(t.rows * t.cols);
  for (const auto& row : values) {
    require_shape(row.size() == t.cols, "from_rows: ragged row");
    for (double v : row) {
      t.data.push_back(v);
    }
  }
  return t;
}

void check_finite(const Tensor2D& t, const std::string& context) {
  for (double v : t.data) {
    if (!std::isfinite(v)) {
      raise(ErrorCode::NonFinite, context + " produced a non-finite value");
    }
  }
}

void require_shape(bool condition, const std::string& message) {
  if (!condition) {
    raise(ErrorCode::ShapeMismatch, message);
  }
}

} // namespace fixlab
