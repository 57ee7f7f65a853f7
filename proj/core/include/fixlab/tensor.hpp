#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace fixlab {

/// Dense row-major matrix of 64-bit floats. The only tensor shape the
/// training core needs; vectors are 1 x n.
struct Tensor2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Tensor2D() = default;
  Tensor2D(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  static Tensor2D from_rows(std::initializer_list<std::initializer_list<double>> values);

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::size_t size() const { return data.size(); }
  bool same_shape(const Tensor2D& other) const {
    return rows == other.rows && cols == other.cols;
  }

  bool operator==(const Tensor2D& other) const = default;
};

/// Throws NonFinite if any entry is NaN or infinite. `context` names the
/// producing operation in the error message.
void check_finite(const Tensor2D& t, const std::string& context);

/// Throws ShapeMismatch unless the condition holds.
void require_shape(bool condition, const std::string& message);

} // namespace fixlab
