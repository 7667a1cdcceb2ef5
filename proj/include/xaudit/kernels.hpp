// Hot numeric loops, each in two forms: an OpenMP kernel used by the library
// and a plain serial reference kept for testing and benchmarking.
//
// The parallel kernels are *element-parallel*: every output element is
// computed start-to-finish by exactly one thread, with a fixed accumulation
// order inside the element. That makes the OMP results bitwise identical to
// the serial references for any thread count or schedule — reproducibility is
// asserted in the unit tests and the two variants are raced in xaudit_bench.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "xaudit/matrix.hpp"

namespace xaudit {

// --- General matrix multiply -------------------------------------------

/// C = op(A) * op(B) where op transposes when the flag is set. C is resized.
/// Throws std::invalid_argument on inner-dimension mismatch.
void gemm(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b,
          Matrix& c);
void gemm_serial(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b,
                 Matrix& c);

// --- Column statistics and Pearson correlation --------------------------

struct ColumnStats {
  std::vector<double> mean;
  std::vector<double> sd;  // population standard deviation
  std::vector<std::uint8_t> zero_variance;
};

ColumnStats column_stats(const Matrix& x);

/// Fills r (d*d) with pairwise Pearson correlations of the columns of x and
/// defined (d*d, 0/1) with whether each entry is defined. Entries touching a
/// zero-variance column are undefined (r left at 0, defined 0) — never
/// silently reported as 0 correlation. Values are clamped to [-1, 1].
void pearson_kernel(const Matrix& x, const ColumnStats& stats, Matrix& r,
                    std::vector<std::uint8_t>& defined);
void pearson_kernel_serial(const Matrix& x, const ColumnStats& stats,
                           Matrix& r, std::vector<std::uint8_t>& defined);

// --- Decision-tree split scan -------------------------------------------

enum class SplitCriterion { kGini, kEntropy };

/// Impurity of a two-class count pair under the given criterion.
double node_impurity(std::uint64_t c0, std::uint64_t c1, SplitCriterion crit);

struct SplitCandidate {
  int feature = -1;  // -1: no impurity-decreasing split exists
  double threshold = 0.0;
  double gain = 0.0;  // impurity decrease at the node
};

/// Scans every feature for the best threshold over the given rows.
/// Candidate thresholds are midpoints between consecutive distinct values;
/// ties on gain resolve to the lowest feature index, then lowest threshold.
SplitCandidate best_split_scan(const Matrix& x, const std::vector<int>& y,
                               const std::vector<std::size_t>& rows,
                               SplitCriterion crit);
SplitCandidate best_split_scan_serial(const Matrix& x,
                                      const std::vector<int>& y,
                                      const std::vector<std::size_t>& rows,
                                      SplitCriterion crit);

// --- Coalition evaluation (SHAP value function) --------------------------

/// Batched model evaluation: takes an n*d matrix, returns n outputs.
using BatchFn = std::function<std::vector<double>(const Matrix&)>;

/// For each coalition mask, builds the hybrid rows (background row with the
/// masked features replaced by the instance x) and returns the mean model
/// output over the background — the interventional value function v(S).
/// masks is n_masks * m flat (0/1); evaluation is chunked so peak memory
/// stays bounded regardless of coalition count.
std::vector<double> coalition_values(const BatchFn& f, const double* x,
                                     std::size_t m, const Matrix& background,
                                     const std::vector<std::uint8_t>& masks,
                                     std::size_t n_masks);
std::vector<double> coalition_values_serial(
    const BatchFn& f, const double* x, std::size_t m, const Matrix& background,
    const std::vector<std::uint8_t>& masks, std::size_t n_masks);

}  // namespace xaudit
