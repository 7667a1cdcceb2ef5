// Small dense solvers for the handful of square systems the library needs
// (ridge normal equations, kernel-SHAP weighted least squares).
#pragma once

#include <cstddef>
#include <vector>

namespace xaudit {

/// Solves A x = b for symmetric positive-definite A (row-major n*n) via
/// Cholesky. A and b are consumed. Returns false if A is not positive
/// definite (b is then unspecified).
bool cholesky_solve(std::vector<double> a, std::vector<double> b,
                    std::size_t n, std::vector<double>& x);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws std::runtime_error if A is numerically singular.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b,
                                 std::size_t n);

}  // namespace xaudit
