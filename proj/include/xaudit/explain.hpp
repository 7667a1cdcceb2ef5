// Post-hoc explanation methods, all operating on raw-feature rows through a
// model's continuous explanation output, plus a closed-form two-feature demo
// of when gradient readings and coefficient readings disagree.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xaudit/dataset.hpp"
#include "xaudit/importance.hpp"
#include "xaudit/kernels.hpp"
#include "xaudit/metrics.hpp"
#include "xaudit/model.hpp"

namespace xaudit {

// --- Permutation importance -------------------------------------------------

/// Baseline test metric minus the mean metric over `repeats` within-column
/// shuffles; each (feature, repeat) pair draws from its own seed-derived
/// stream, so results are independent of evaluation order. Negative scores
/// are preserved. A repeat whose metric is flag-undefined contributes its
/// convention value. Throws DataError when the baseline itself is undefined.
ImportanceVector permutation_importance(const TrainedModel& m,
                                        const Dataset& test,
                                        MetricSelector metric = MetricSelector::kMcc,
                                        std::uint64_t repeats = 10,
                                        std::uint64_t seed = 0);

// --- Kernel SHAP ---------------------------------------------------------

struct ShapMatrix {
  std::vector<std::string> feature_names;
  Matrix values;  // n_instances * n_features
  double base_value = 0.0;  // mean model output over the background
  std::uint64_t seed = 0;
  std::uint64_t n_coalitions = 0;  // coalition evaluations per instance
  bool exhaustive = false;         // full enumeration vs paired sampling
};

/// Full coalition enumeration at or below this many features; the solved
/// weighted least squares is then exactly the Shapley attribution.
inline constexpr std::size_t kShapFullEnumMax = 12;

/// Interventional Kernel SHAP over an arbitrary batched function of
/// n_features inputs. Feature names are left empty (the model-level wrapper
/// fills them). The additive-recovery constraint (attributions sum to
/// f(x) - base) is enforced exactly by eliminating the last feature from the
/// weighted least squares rather than approximated with a penalty row.
/// Above kShapFullEnumMax features, coalitions are drawn in antithetic
/// (subset, complement) pairs from the Shapley-kernel size distribution;
/// n_samples (>= n_features + 2) bounds the coalition budget.
ShapMatrix kernel_shap_fn(const BatchFn& f, std::size_t n_features,
                          const Matrix& background, const Matrix& instances,
                          std::uint64_t n_samples, std::uint64_t seed);

/// Model-level wrapper: explains explanation_output(m, .), capping the
/// background at 100 rows sampled without replacement by seed.
ShapMatrix kernel_shap(const TrainedModel& m, const Matrix& background,
                       const Matrix& instances, std::uint64_t n_samples = 2048,
                       std::uint64_t seed = 0);

/// Brute-force Shapley values by full subset enumeration (the oracle the
/// sampler is tested against). The background is used exactly as given; no
/// sampling, no seed. Rejects more than 15 features (2^m evaluations).
std::vector<double> exact_shapley_fn(const BatchFn& f, const Matrix& background,
                                     std::span<const double> instance);
std::vector<double> exact_shapley(const TrainedModel& m,
                                  const Matrix& background,
                                  std::span<const double> instance);

/// Mean |SHAP| per feature over the explained instances.
ImportanceVector global_shap_importance(const ShapMatrix& s);

// --- Two-feature alignment demo ---------------------------------------------

/// Closed-form models over features T (grid [0, 10]) and H (grid [0, 1]):
/// step variant  f = c1 * [T > threshold] + c2 * H,
/// smooth variant f = sigmoid(c1 * (T - threshold) + c2 * H).
/// Compares the coefficient reading (|c1| vs |c2|) against the mean
/// |analytic gradient| over the grid. The step variant has zero T-gradient
/// almost everywhere, so the two readings disagree whenever c2 != 0 — the
/// smallest case where "importance" depends on the lens.
struct ToyVariantResult {
  std::string coefficient_top;  // "T" or "H"
  std::string gradient_top;
  double grad_mean_abs_t = 0.0;
  double grad_mean_abs_h = 0.0;
};

struct ToyAlignmentReport {
  double c1 = 0.0;
  double c2 = 0.0;
  double threshold = 0.0;
  ToyVariantResult step;
  ToyVariantResult smooth;
};

ToyAlignmentReport toy_alignment_demo(double c1, double c2, double threshold);

}  // namespace xaudit
