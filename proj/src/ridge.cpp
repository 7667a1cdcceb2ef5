#include "xaudit/ridge.hpp"

#include <stdexcept>

#include "xaudit/kernels.hpp"
#include "xaudit/linalg.hpp"

namespace xaudit {

double RidgeModel::score_row(const double* row) const {
  double s = intercept;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    s += coefficients[j] * row[j];
  }
  return s;
}

std::vector<double> RidgeModel::score(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = score_row(x.row_ptr(r));
  return out;
}

std::vector<int> RidgeModel::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    out[r] = score_row(x.row_ptr(r)) > 0.0 ? 1 : 0;
  }
  return out;
}

RidgeModel train_ridge(const Dataset& train, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("train_ridge: alpha must be >= 0");
  const std::size_t n = train.n_rows();
  const std::size_t d = train.n_features();
  if (n == 0) throw std::invalid_argument("train_ridge: empty dataset");
  std::uint64_t pos = 0;
  for (int v : train.y) pos += static_cast<std::uint64_t>(v);
  if (pos == 0 || pos == n) {
    throw std::invalid_argument("train_ridge: both classes must be present");
  }

  // Center features and +/-1 targets; solve the penalized normal equations on
  // the centered problem so the intercept stays unpenalized.
  const ColumnStats stats = column_stats(train.x);
  Matrix xc(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      xc(r, j) = train.x(r, j) - stats.mean[j];
    }
  }
  const double y_mean =
      (2.0 * static_cast<double>(pos) - static_cast<double>(n)) /
      static_cast<double>(n);
  std::vector<double> yc(n);
  for (std::size_t r = 0; r < n; ++r) {
    yc[r] = (train.y[r] == 1 ? 1.0 : -1.0) - y_mean;
  }

  Matrix gram;
  gemm(xc, true, xc, false, gram);  // Xc^T Xc, d*d
  std::vector<double> a = gram.data;
  for (std::size_t j = 0; j < d; ++j) a[j * d + j] += alpha;
  std::vector<double> rhs(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < n; ++r) acc += xc(r, j) * yc[r];
    rhs[j] = acc;
  }

  RidgeModel m;
  m.alpha = alpha;
  if (!cholesky_solve(a, rhs, d, m.coefficients)) {
    // alpha = 0 with collinear columns: fall back to pivoted elimination,
    // which throws std::runtime_error if the system is truly singular.
    std::vector<double> a2 = gram.data;
    for (std::size_t j = 0; j < d; ++j) a2[j * d + j] += alpha;
    m.coefficients = solve_linear(std::move(a2), rhs, d);
  }
  m.intercept = y_mean;
  for (std::size_t j = 0; j < d; ++j) {
    m.intercept -= m.coefficients[j] * stats.mean[j];
  }
  return m;
}

}  // namespace xaudit
