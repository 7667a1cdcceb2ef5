#include "xaudit/explain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "xaudit/common.hpp"
#include "xaudit/linalg.hpp"
#include "xaudit/rng.hpp"

namespace xaudit {

namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

BatchFn model_batch_fn(const TrainedModel& m) {
  return [&m](const Matrix& rows) { return explanation_output(m, rows); };
}

// Solves the Shapley-kernel weighted least squares with the additive-recovery
// constraint eliminated: substituting phi_last = delta - sum(others) into the
// objective leaves an unconstrained (m-1)-dim problem whose normal equations
// we solve directly. With the full coalition enumeration this reproduces the
// exact Shapley attribution.
std::vector<double> solve_constrained_wls(
    const std::vector<std::uint8_t>& masks, std::size_t n_masks, std::size_t m,
    const std::vector<double>& weights, const std::vector<double>& v,
    double base, double delta) {
  if (m == 1) return {delta};
  const std::size_t k = m - 1;
  std::vector<double> g(k * k, 0.0);
  std::vector<double> rhs(k, 0.0);
  std::vector<double> xrow(k, 0.0);
  for (std::size_t s = 0; s < n_masks; ++s) {
    const std::uint8_t* mask = masks.data() + s * m;
    const double zm = static_cast<double>(mask[m - 1]);
    for (std::size_t j = 0; j < k; ++j) {
      xrow[j] = static_cast<double>(mask[j]) - zm;
    }
    const double target = v[s] - base - zm * delta;
    const double w = weights[s];
    for (std::size_t i = 0; i < k; ++i) {
      if (xrow[i] == 0.0) continue;
      rhs[i] += w * xrow[i] * target;
      for (std::size_t j = i; j < k; ++j) {
        g[i * k + j] += w * xrow[i] * xrow[j];
      }
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) g[i * k + j] = g[j * k + i];
  }
  std::vector<double> phi;
  if (!cholesky_solve(g, rhs, k, phi)) {
    phi = solve_linear(std::move(g), std::move(rhs), k);
  }
  double sum = 0.0;
  for (double p : phi) sum += p;
  phi.push_back(delta - sum);
  return phi;
}

// All coalition masks of sizes 1..m-1 in ascending bit-pattern order.
std::vector<std::uint8_t> enumerate_masks(std::size_t m, std::size_t& n_masks) {
  const std::size_t total = std::size_t{1} << m;
  std::vector<std::uint8_t> masks;
  masks.reserve((total - 2) * m);
  n_masks = 0;
  for (std::size_t bits = 1; bits + 1 < total; ++bits) {
    for (std::size_t j = 0; j < m; ++j) {
      masks.push_back(static_cast<std::uint8_t>((bits >> j) & 1));
    }
    ++n_masks;
  }
  return masks;
}

double binom(std::size_t n, std::size_t r) {
  double acc = 1.0;
  for (std::size_t i = 1; i <= r; ++i) {
    acc *= static_cast<double>(n - r + i) / static_cast<double>(i);
  }
  return acc;
}

}  // namespace

ImportanceVector permutation_importance(const TrainedModel& m,
                                        const Dataset& test,
                                        MetricSelector metric,
                                        std::uint64_t repeats,
                                        std::uint64_t seed) {
  if (repeats == 0) {
    throw std::invalid_argument("permutation_importance: repeats must be >= 1");
  }
  if (test.n_rows() == 0) {
    throw std::invalid_argument("permutation_importance: empty test set");
  }
  if (test.n_features() != m.n_features()) {
    throw std::invalid_argument(
        "permutation_importance: feature count mismatch");
  }
  const std::vector<int> base_pred = predict_labels(m, test.x);
  const MetricSet base_metrics = score(confusion(test.y, base_pred));
  if (metric_undefined(base_metrics, metric)) {
    throw DataError("permutation_importance: baseline " + metric_name(metric) +
                    " is undefined on this test set");
  }
  const double baseline = metric_value(base_metrics, metric);

  ImportanceVector out;
  out.method = ImportanceMethod::kPermutation;
  out.feature_names = test.feature_names;
  out.scores.assign(test.n_features(), 0.0);
  out.seed = seed;
  out.repeats = repeats;

  Matrix work = test.x;
  std::vector<double> column(test.n_rows());
  for (std::size_t j = 0; j < test.n_features(); ++j) {
    const std::uint64_t feature_seed =
        derive_seed(seed, streams::kPermutation, j);
    double acc = 0.0;
    for (std::uint64_t rep = 0; rep < repeats; ++rep) {
      for (std::size_t r = 0; r < test.n_rows(); ++r) column[r] = test.x(r, j);
      Rng rng(derive_seed(feature_seed, rep));
      rng.shuffle(column);
      for (std::size_t r = 0; r < test.n_rows(); ++r) work(r, j) = column[r];
      const MetricSet s = score(confusion(test.y, predict_labels(m, work)));
      acc += metric_value(s, metric);
    }
    out.scores[j] = baseline - acc / static_cast<double>(repeats);
    for (std::size_t r = 0; r < test.n_rows(); ++r) work(r, j) = test.x(r, j);
  }
  finalize_degeneracy(out);
  return out;
}

ShapMatrix kernel_shap_fn(const BatchFn& f, std::size_t n_features,
                          const Matrix& background, const Matrix& instances,
                          std::uint64_t n_samples, std::uint64_t seed) {
  const std::size_t m = n_features;
  if (m == 0) throw std::invalid_argument("kernel_shap: zero features");
  if (background.rows == 0 || background.cols != m) {
    throw std::invalid_argument("kernel_shap: bad background");
  }
  if (instances.rows == 0 || instances.cols != m) {
    throw std::invalid_argument("kernel_shap: bad instances");
  }
  const bool exhaustive = m <= kShapFullEnumMax;
  if (!exhaustive && n_samples < m + 2) {
    throw std::invalid_argument(
        "kernel_shap: n_samples must be at least n_features + 2");
  }

  ShapMatrix out;
  out.values = Matrix(instances.rows, m);
  out.seed = seed;
  out.exhaustive = exhaustive;

  const std::vector<double> bg_eval = f(background);
  out.base_value =
      std::accumulate(bg_eval.begin(), bg_eval.end(), 0.0) /
      static_cast<double>(background.rows);
  const std::vector<double> fx = f(instances);

  // Shared across instances on the enumeration path.
  std::vector<std::uint8_t> enum_masks;
  std::vector<double> enum_weights;
  std::size_t enum_count = 0;
  if (exhaustive && m > 1) {
    enum_masks = enumerate_masks(m, enum_count);
    enum_weights.resize(enum_count);
    for (std::size_t s = 0; s < enum_count; ++s) {
      std::size_t size = 0;
      for (std::size_t j = 0; j < m; ++j) size += enum_masks[s * m + j];
      enum_weights[s] = static_cast<double>(m - 1) /
                        (binom(m, size) * static_cast<double>(size) *
                         static_cast<double>(m - size));
    }
  }

  for (std::size_t i = 0; i < instances.rows; ++i) {
    const double* x = instances.row_ptr(i);
    const double delta = fx[i] - out.base_value;
    std::vector<double> phi;
    if (exhaustive) {
      if (m == 1) {
        phi = {delta};
        out.n_coalitions = 0;
      } else {
        const std::vector<double> v =
            coalition_values(f, x, m, background, enum_masks, enum_count);
        phi = solve_constrained_wls(enum_masks, enum_count, m, enum_weights, v,
                                    out.base_value, delta);
        out.n_coalitions = enum_count;
      }
    } else {
      // Paired sampling: sizes follow the Shapley-kernel distribution
      // p(s) proportional to 1/(s*(m-s)); each subset enters with its
      // complement, which cancels the leading estimator noise term.
      const std::size_t n_pairs = n_samples / 2;
      std::vector<double> size_cdf(m - 1, 0.0);
      double total = 0.0;
      for (std::size_t s = 1; s < m; ++s) {
        total += 1.0 / (static_cast<double>(s) * static_cast<double>(m - s));
        size_cdf[s - 1] = total;
      }
      for (double& c : size_cdf) c /= total;

      Rng rng(derive_seed(seed, streams::kShapCoalitions, i));
      std::vector<std::uint8_t> masks(2 * n_pairs * m, 0);
      std::vector<std::size_t> pool(m);
      for (std::size_t p = 0; p < n_pairs; ++p) {
        const double u = rng.uniform();
        std::size_t size = 1;
        while (size < m - 1 && u > size_cdf[size - 1]) ++size;
        std::iota(pool.begin(), pool.end(), 0);
        // Partial Fisher-Yates: the first `size` entries form the subset.
        for (std::size_t t = 0; t < size; ++t) {
          const std::size_t j = t + static_cast<std::size_t>(
                                        rng.below(m - t));
          std::swap(pool[t], pool[j]);
        }
        std::uint8_t* mask = masks.data() + (2 * p) * m;
        std::uint8_t* anti = masks.data() + (2 * p + 1) * m;
        for (std::size_t j = 0; j < m; ++j) anti[j] = 1;
        for (std::size_t t = 0; t < size; ++t) {
          mask[pool[t]] = 1;
          anti[pool[t]] = 0;
        }
      }
      const std::vector<double> v =
          coalition_values(f, x, m, background, masks, 2 * n_pairs);
      const std::vector<double> weights(2 * n_pairs, 1.0);
      phi = solve_constrained_wls(masks, 2 * n_pairs, m, weights, v,
                                  out.base_value, delta);
      out.n_coalitions = 2 * n_pairs;
    }
    for (std::size_t j = 0; j < m; ++j) out.values(i, j) = phi[j];
  }
  return out;
}

ShapMatrix kernel_shap(const TrainedModel& m, const Matrix& background,
                       const Matrix& instances, std::uint64_t n_samples,
                       std::uint64_t seed) {
  constexpr std::size_t kBackgroundCap = 100;
  const Matrix* bg = &background;
  Matrix sampled;
  if (background.rows > kBackgroundCap) {
    std::vector<std::size_t> idx(background.rows);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, streams::kShapBackground));
    for (std::size_t t = 0; t < kBackgroundCap; ++t) {
      const std::size_t j =
          t + static_cast<std::size_t>(rng.below(background.rows - t));
      std::swap(idx[t], idx[j]);
    }
    idx.resize(kBackgroundCap);
    std::sort(idx.begin(), idx.end());
    sampled = Matrix(kBackgroundCap, background.cols);
    for (std::size_t r = 0; r < kBackgroundCap; ++r) {
      const double* src = background.row_ptr(idx[r]);
      std::copy(src, src + background.cols, sampled.row_ptr(r));
    }
    bg = &sampled;
  }
  const BatchFn f = model_batch_fn(m);
  ShapMatrix s =
      kernel_shap_fn(f, m.n_features(), *bg, instances, n_samples, seed);
  s.feature_names = m.feature_names;
  return s;
}

std::vector<double> exact_shapley_fn(const BatchFn& f, const Matrix& background,
                                     std::span<const double> instance) {
  const std::size_t m = background.cols;
  if (m == 0 || m > 15) {
    throw std::invalid_argument(
        "exact_shapley: feature count must be in [1, 15]");
  }
  if (background.rows == 0) {
    throw std::invalid_argument("exact_shapley: empty background");
  }
  if (instance.size() != m) {
    throw std::invalid_argument("exact_shapley: instance arity mismatch");
  }
  const std::size_t total = std::size_t{1} << m;
  std::vector<std::uint8_t> masks(total * m);
  for (std::size_t bits = 0; bits < total; ++bits) {
    for (std::size_t j = 0; j < m; ++j) {
      masks[bits * m + j] = static_cast<std::uint8_t>((bits >> j) & 1);
    }
  }
  const std::vector<double> v =
      coalition_values(f, instance.data(), m, background, masks, total);

  std::vector<double> factorial(m + 1, 1.0);
  for (std::size_t i = 1; i <= m; ++i) {
    factorial[i] = factorial[i - 1] * static_cast<double>(i);
  }
  std::vector<double> phi(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    for (std::size_t bits = 0; bits < total; ++bits) {
      if (bits & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(bits));
      const double w =
          factorial[size] * factorial[m - size - 1] / factorial[m];
      phi[j] += w * (v[bits | bit] - v[bits]);
    }
  }
  return phi;
}

std::vector<double> exact_shapley(const TrainedModel& m,
                                  const Matrix& background,
                                  std::span<const double> instance) {
  return exact_shapley_fn(model_batch_fn(m), background, instance);
}

ImportanceVector global_shap_importance(const ShapMatrix& s) {
  ImportanceVector out;
  out.method = ImportanceMethod::kShapGlobal;
  out.feature_names = s.feature_names;
  out.scores.assign(s.values.cols, 0.0);
  out.seed = s.seed;
  out.samples = s.values.rows;
  for (std::size_t j = 0; j < s.values.cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.values.rows; ++i) {
      acc += std::fabs(s.values(i, j));
    }
    out.scores[j] = acc / static_cast<double>(s.values.rows);
  }
  finalize_degeneracy(out);
  return out;
}

ToyAlignmentReport toy_alignment_demo(double c1, double c2, double threshold) {
  if (!std::isfinite(c1) || !std::isfinite(c2) || !std::isfinite(threshold)) {
    throw std::invalid_argument("toy_alignment_demo: non-finite parameter");
  }
  constexpr std::size_t kTPoints = 201;  // T in [0, 10]
  constexpr std::size_t kHPoints = 101;  // H in [0, 1]

  ToyAlignmentReport report;
  report.c1 = c1;
  report.c2 = c2;
  report.threshold = threshold;

  const std::string coef_top = std::fabs(c1) >= std::fabs(c2) ? "T" : "H";
  report.step.coefficient_top = coef_top;
  report.smooth.coefficient_top = coef_top;

  double step_t = 0.0, step_h = 0.0, smooth_t = 0.0, smooth_h = 0.0;
  for (std::size_t it = 0; it < kTPoints; ++it) {
    const double t = 10.0 * static_cast<double>(it) /
                     static_cast<double>(kTPoints - 1);
    for (std::size_t ih = 0; ih < kHPoints; ++ih) {
      const double h = static_cast<double>(ih) /
                       static_cast<double>(kHPoints - 1);
      // Step variant: dT = 0 almost everywhere (the jump carries no measure),
      // dH = c2 identically.
      step_h += std::fabs(c2);
      const double sig = stable_sigmoid(c1 * (t - threshold) + c2 * h);
      const double dsig = sig * (1.0 - sig);
      smooth_t += std::fabs(c1 * dsig);
      smooth_h += std::fabs(c2 * dsig);
    }
  }
  const double cells = static_cast<double>(kTPoints * kHPoints);
  report.step.grad_mean_abs_t = step_t / cells;
  report.step.grad_mean_abs_h = step_h / cells;
  report.smooth.grad_mean_abs_t = smooth_t / cells;
  report.smooth.grad_mean_abs_h = smooth_h / cells;
  report.step.gradient_top =
      report.step.grad_mean_abs_t >= report.step.grad_mean_abs_h ? "T" : "H";
  report.smooth.gradient_top =
      report.smooth.grad_mean_abs_t >= report.smooth.grad_mean_abs_h ? "T"
                                                                     : "H";
  return report;
}

}  // namespace xaudit
