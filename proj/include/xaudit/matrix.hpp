// Minimal row-major dense matrix. Deliberately dumb: the library needs
// predictable memory layout and bitwise-reproducible arithmetic, not BLAS.
#pragma once

#include <cstddef>
#include <vector>

namespace xaudit {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, rows*cols

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data[r * cols + c];
  }

  double* row_ptr(std::size_t r) { return data.data() + r * cols; }
  const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }

  bool operator==(const Matrix&) const = default;
};

}  // namespace xaudit
