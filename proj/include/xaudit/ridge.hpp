// Closed-form ridge classifier: regularized least squares on +/-1 targets,
// sign rule for prediction. Expects standardized inputs (the model pipeline
// takes care of that); the intercept is unpenalized via centering.
#pragma once

#include <cstdint>
#include <vector>

#include "xaudit/dataset.hpp"

namespace xaudit {

struct RidgeModel {
  std::vector<double> coefficients;
  double intercept = 0.0;
  double alpha = 1.0;

  /// Raw score w.x + b (the linear explanation target).
  double score_row(const double* row) const;
  std::vector<double> score(const Matrix& x) const;
  /// Sign rule; a score of exactly 0 maps to label 0.
  std::vector<int> predict(const Matrix& x) const;
};

/// Solves (Xc^T Xc + alpha I) w = Xc^T yc on centered data, then recovers the
/// intercept, so the penalty never touches it. Targets are y mapped to +/-1.
/// Uses Cholesky (falls back to pivoted elimination when alpha = 0 makes the
/// system only semidefinite). Throws std::invalid_argument for alpha < 0 or
/// a single-class/empty dataset.
RidgeModel train_ridge(const Dataset& train, double alpha = 1.0);

}  // namespace xaudit
