#include "xaudit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace xaudit {

namespace {

struct GemmDims {
  std::size_t m, n, k;
};

GemmDims gemm_dims(const Matrix& a, bool trans_a, const Matrix& b,
                   bool trans_b) {
  const std::size_t m = trans_a ? a.cols : a.rows;
  const std::size_t ka = trans_a ? a.rows : a.cols;
  const std::size_t kb = trans_b ? b.cols : b.rows;
  const std::size_t n = trans_b ? b.rows : b.cols;
  if (ka != kb) throw std::invalid_argument("gemm: inner dimension mismatch");
  return {m, n, ka};
}

inline double gemm_cell(const Matrix& a, bool trans_a, const Matrix& b,
                        bool trans_b, std::size_t i, std::size_t j,
                        std::size_t k) {
  double acc = 0.0;
  for (std::size_t p = 0; p < k; ++p) {
    const double av = trans_a ? a(p, i) : a(i, p);
    const double bv = trans_b ? b(j, p) : b(p, j);
    acc += av * bv;
  }
  return acc;
}

inline double pearson_cell(const Matrix& x, const ColumnStats& s,
                           std::size_t i, std::size_t j) {
  const double mi = s.mean[i];
  const double mj = s.mean[j];
  double acc = 0.0;
  for (std::size_t r = 0; r < x.rows; ++r) {
    acc += (x(r, i) - mi) * (x(r, j) - mj);
  }
  const double r = acc / (static_cast<double>(x.rows) * s.sd[i] * s.sd[j]);
  return std::clamp(r, -1.0, 1.0);
}

// Best threshold for a single feature over the given rows; candidate = -1
// feature if nothing strictly decreases impurity.
SplitCandidate scan_one_feature(const Matrix& x, const std::vector<int>& y,
                                const std::vector<std::size_t>& rows,
                                SplitCriterion crit, int feature,
                                double parent_impurity) {
  const std::size_t n = rows.size();
  std::vector<std::pair<double, int>> vals(n);
  std::uint64_t total1 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    vals[i] = {x(rows[i], static_cast<std::size_t>(feature)), y[rows[i]]};
    total1 += static_cast<std::uint64_t>(y[rows[i]]);
  }
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::uint64_t total0 = n - total1;

  SplitCandidate best;
  std::uint64_t left0 = 0, left1 = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (vals[i].second == 0) {
      ++left0;
    } else {
      ++left1;
    }
    if (!(vals[i].first < vals[i + 1].first)) continue;  // not a boundary
    const std::uint64_t nl = left0 + left1;
    const std::uint64_t nr = n - nl;
    const double wl = static_cast<double>(nl) / static_cast<double>(n);
    const double wr = static_cast<double>(nr) / static_cast<double>(n);
    const double child = wl * node_impurity(left0, left1, crit) +
                         wr * node_impurity(total0 - left0, total1 - left1, crit);
    const double gain = parent_impurity - child;
    if (gain > best.gain) {
      double thr = 0.5 * (vals[i].first + vals[i + 1].first);
      // Adjacent representable values can round the midpoint up to the right
      // value; pin it back so "x <= threshold" reproduces the scanned split.
      if (!(thr < vals[i + 1].first)) thr = vals[i].first;
      best = {feature, thr, gain};
    }
  }
  return best;
}

// Ascending-feature merge shared by both split-scan variants so tie-breaking
// (lowest feature index, then lowest threshold) is identical.
SplitCandidate merge_candidates(const std::vector<SplitCandidate>& per_feature) {
  SplitCandidate best;
  for (const SplitCandidate& c : per_feature) {
    if (c.feature >= 0 && c.gain > best.gain) best = c;
  }
  return best;
}

constexpr std::size_t kCoalitionChunkRows = 65536;

}  // namespace

void gemm(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b,
          Matrix& c) {
  const GemmDims d = gemm_dims(a, trans_a, b, trans_b);
  c = Matrix(d.m, d.n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < d.m; ++i) {
    for (std::size_t j = 0; j < d.n; ++j) {
      c(i, j) = gemm_cell(a, trans_a, b, trans_b, i, j, d.k);
    }
  }
}

void gemm_serial(const Matrix& a, bool trans_a, const Matrix& b, bool trans_b,
                 Matrix& c) {
  const GemmDims d = gemm_dims(a, trans_a, b, trans_b);
  c = Matrix(d.m, d.n);
  for (std::size_t i = 0; i < d.m; ++i) {
    for (std::size_t j = 0; j < d.n; ++j) {
      c(i, j) = gemm_cell(a, trans_a, b, trans_b, i, j, d.k);
    }
  }
}

ColumnStats column_stats(const Matrix& x) {
  ColumnStats s;
  s.mean.assign(x.cols, 0.0);
  s.sd.assign(x.cols, 0.0);
  s.zero_variance.assign(x.cols, 0);
  if (x.rows == 0) return s;
  for (std::size_t j = 0; j < x.cols; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) acc += x(r, j);
    s.mean[j] = acc / static_cast<double>(x.rows);
  }
  for (std::size_t j = 0; j < x.cols; ++j) {
    double acc = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
      const double d = x(r, j) - s.mean[j];
      acc += d * d;
    }
    s.sd[j] = std::sqrt(acc / static_cast<double>(x.rows));
    s.zero_variance[j] = s.sd[j] == 0.0 ? 1 : 0;
  }
  return s;
}

void pearson_kernel(const Matrix& x, const ColumnStats& stats, Matrix& r,
                    std::vector<std::uint8_t>& defined) {
  const std::size_t d = x.cols;
  r = Matrix(d, d);
  defined.assign(d * d, 0);
  const std::size_t n_pairs = d * (d + 1) / 2;
#pragma omp parallel for schedule(static)
  for (std::size_t p = 0; p < n_pairs; ++p) {
    // Unflatten p into upper-triangle coordinates (i <= j).
    std::size_t i = 0;
    std::size_t rem = p;
    while (rem >= d - i) {
      rem -= d - i;
      ++i;
    }
    const std::size_t j = i + rem;
    if (stats.zero_variance[i] || stats.zero_variance[j]) continue;
    const double v = i == j ? 1.0 : pearson_cell(x, stats, i, j);
    r(i, j) = v;
    r(j, i) = v;
    defined[i * d + j] = 1;
    defined[j * d + i] = 1;
  }
}

void pearson_kernel_serial(const Matrix& x, const ColumnStats& stats,
                           Matrix& r, std::vector<std::uint8_t>& defined) {
  const std::size_t d = x.cols;
  r = Matrix(d, d);
  defined.assign(d * d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      if (stats.zero_variance[i] || stats.zero_variance[j]) continue;
      const double v = i == j ? 1.0 : pearson_cell(x, stats, i, j);
      r(i, j) = v;
      r(j, i) = v;
      defined[i * d + j] = 1;
      defined[j * d + i] = 1;
    }
  }
}

double node_impurity(std::uint64_t c0, std::uint64_t c1, SplitCriterion crit) {
  const std::uint64_t n = c0 + c1;
  if (n == 0) return 0.0;
  const double p0 = static_cast<double>(c0) / static_cast<double>(n);
  const double p1 = static_cast<double>(c1) / static_cast<double>(n);
  if (crit == SplitCriterion::kGini) {
    return 1.0 - (p0 * p0 + p1 * p1);
  }
  double h = 0.0;
  if (c0 > 0) h -= p0 * std::log2(p0);
  if (c1 > 0) h -= p1 * std::log2(p1);
  return h;
}

SplitCandidate best_split_scan(const Matrix& x, const std::vector<int>& y,
                               const std::vector<std::size_t>& rows,
                               SplitCriterion crit) {
  std::uint64_t c1 = 0;
  for (std::size_t r : rows) c1 += static_cast<std::uint64_t>(y[r]);
  const double parent = node_impurity(rows.size() - c1, c1, crit);
  std::vector<SplitCandidate> per_feature(x.cols);
#pragma omp parallel for schedule(static)
  for (std::size_t f = 0; f < x.cols; ++f) {
    per_feature[f] =
        scan_one_feature(x, y, rows, crit, static_cast<int>(f), parent);
  }
  return merge_candidates(per_feature);
}

SplitCandidate best_split_scan_serial(const Matrix& x,
                                      const std::vector<int>& y,
                                      const std::vector<std::size_t>& rows,
                                      SplitCriterion crit) {
  std::uint64_t c1 = 0;
  for (std::size_t r : rows) c1 += static_cast<std::uint64_t>(y[r]);
  const double parent = node_impurity(rows.size() - c1, c1, crit);
  std::vector<SplitCandidate> per_feature(x.cols);
  for (std::size_t f = 0; f < x.cols; ++f) {
    per_feature[f] =
        scan_one_feature(x, y, rows, crit, static_cast<int>(f), parent);
  }
  return merge_candidates(per_feature);
}

std::vector<double> coalition_values(const BatchFn& f, const double* x,
                                     std::size_t m, const Matrix& background,
                                     const std::vector<std::uint8_t>& masks,
                                     std::size_t n_masks) {
  const std::size_t nb = background.rows;
  std::vector<double> v(n_masks, 0.0);
  const std::size_t masks_per_chunk =
      std::max<std::size_t>(1, kCoalitionChunkRows / std::max<std::size_t>(nb, 1));
  Matrix hybrid;
  for (std::size_t start = 0; start < n_masks; start += masks_per_chunk) {
    const std::size_t count = std::min(masks_per_chunk, n_masks - start);
    hybrid = Matrix(count * nb, m);
#pragma omp parallel for schedule(static)
    for (std::size_t h = 0; h < count * nb; ++h) {
      const std::uint8_t* mask = masks.data() + (start + h / nb) * m;
      const double* bg = background.row_ptr(h % nb);
      double* out = hybrid.row_ptr(h);
      for (std::size_t j = 0; j < m; ++j) out[j] = mask[j] ? x[j] : bg[j];
    }
    const std::vector<double> eval = f(hybrid);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < count; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < nb; ++r) acc += eval[k * nb + r];
      v[start + k] = acc / static_cast<double>(nb);
    }
  }
  return v;
}

std::vector<double> coalition_values_serial(
    const BatchFn& f, const double* x, std::size_t m, const Matrix& background,
    const std::vector<std::uint8_t>& masks, std::size_t n_masks) {
  const std::size_t nb = background.rows;
  std::vector<double> v(n_masks, 0.0);
  const std::size_t masks_per_chunk =
      std::max<std::size_t>(1, kCoalitionChunkRows / std::max<std::size_t>(nb, 1));
  Matrix hybrid;
  for (std::size_t start = 0; start < n_masks; start += masks_per_chunk) {
    const std::size_t count = std::min(masks_per_chunk, n_masks - start);
    hybrid = Matrix(count * nb, m);
    for (std::size_t h = 0; h < count * nb; ++h) {
      const std::uint8_t* mask = masks.data() + (start + h / nb) * m;
      const double* bg = background.row_ptr(h % nb);
      double* out = hybrid.row_ptr(h);
      for (std::size_t j = 0; j < m; ++j) out[j] = mask[j] ? x[j] : bg[j];
    }
    const std::vector<double> eval = f(hybrid);
    for (std::size_t k = 0; k < count; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < nb; ++r) acc += eval[k * nb + r];
      v[start + k] = acc / static_cast<double>(nb);
    }
  }
  return v;
}

}  // namespace xaudit
