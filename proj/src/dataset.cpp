#include "xaudit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "xaudit/common.hpp"
#include "xaudit/kernels.hpp"
#include "xaudit/rng.hpp"

namespace xaudit {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.push_back(cur);
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || static_cast<std::size_t>(end - begin) != cell.size()) {
    throw DataError("non-numeric cell '" + cell + "' at data row " +
                    std::to_string(row) + ", column '" + column + "'");
  }
  if (!std::isfinite(v)) {
    throw DataError("non-finite cell '" + cell + "' at data row " +
                    std::to_string(row) + ", column '" + column + "'");
  }
  return v;
}

}  // namespace

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError("missing header row: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_line(line);

  const std::unordered_set<std::string> drop(options.drop_columns.begin(),
                                             options.drop_columns.end());
  std::vector<std::size_t> feature_cols;
  std::vector<std::string> feature_names;
  std::size_t label_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == options.label_column) {
      if (label_col != header.size()) {
        throw DataError("label column '" + options.label_column +
                        "' appears more than once");
      }
      label_col = i;
      continue;
    }
    if (drop.count(header[i])) continue;
    feature_cols.push_back(i);
    feature_names.push_back(header[i]);
  }
  if (label_col == header.size()) {
    throw DataError("label column '" + options.label_column + "' not found");
  }
  {
    std::unordered_set<std::string> seen;
    for (const std::string& n : feature_names) {
      if (!seen.insert(n).second) {
        throw DataError("duplicate feature column name '" + n + "'");
      }
    }
  }
  if (feature_names.empty()) {
    throw DataError("no feature columns remain after drops: " + path);
  }

  const std::unordered_set<std::string> positive(
      options.positive_labels.begin(), options.positive_labels.end());

  std::vector<double> cells;
  std::vector<int> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;  // tolerate trailing blank lines
    ++row;
    const std::vector<std::string> parts = split_line(line);
    if (parts.size() != header.size()) {
      throw DataError("data row " + std::to_string(row) + " has " +
                      std::to_string(parts.size()) + " cells, header has " +
                      std::to_string(header.size()));
    }
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      cells.push_back(parse_cell(parts[feature_cols[k]], row, feature_names[k]));
    }
    labels.push_back(positive.count(parts[label_col]) ? 1 : 0);
  }

  Dataset d;
  d.feature_names = feature_names;
  d.x.rows = labels.size();
  d.x.cols = feature_names.size();
  d.x.data = std::move(cells);
  d.y = std::move(labels);
  return d;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_compact(double v) {
  // The lowest round-tripping precision is not always the shortest text:
  // %.1g renders 10.0 as "1e+01" while %.2g gives "10". Scan all precisions
  // and keep the shortest string that still parses back exactly.
  char buf[40];
  std::string best;
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) != v) continue;
    if (best.empty() || std::strlen(buf) < best.size()) best = buf;
  }
  return best;
}

void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_column) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  for (const std::string& n : d.feature_names) out << n << ',';
  out << label_column << '\n';
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (std::size_t c = 0; c < d.n_features(); ++c) {
      out << format_g17(d.x(r, c)) << ',';
    }
    out << d.y[r] << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::string imbalance_degree_name(ImbalanceDegree d) {
  switch (d) {
    case ImbalanceDegree::kBalanced: return "Balanced";
    case ImbalanceDegree::kMild: return "Mild";
    case ImbalanceDegree::kModerate: return "Moderate";
    case ImbalanceDegree::kSevere: return "Severe";
    case ImbalanceDegree::kExtreme: return "Extreme";
  }
  return "Balanced";
}

ImbalanceDegree classify_imbalance(double majority_fraction) {
  if (majority_fraction >= 0.99) return ImbalanceDegree::kExtreme;
  if (majority_fraction >= 0.85) return ImbalanceDegree::kSevere;
  if (majority_fraction >= 0.75) return ImbalanceDegree::kModerate;
  if (majority_fraction >= 0.60) return ImbalanceDegree::kMild;
  return ImbalanceDegree::kBalanced;
}

ImbalanceProfile profile_imbalance(const Dataset& d) {
  if (d.n_rows() == 0) throw DataError("profile_imbalance: empty dataset");
  ImbalanceProfile p;
  p.total = d.n_rows();
  for (int v : d.y) p.positives += static_cast<std::uint64_t>(v);
  const double pos = static_cast<double>(p.positives) / static_cast<double>(p.total);
  p.majority_fraction = std::max(pos, 1.0 - pos);
  p.degree = classify_imbalance(p.majority_fraction);
  return p;
}

CorrelationMatrix pearson_matrix(const Dataset& d) {
  if (d.n_rows() < 2) {
    throw DataError("pearson_matrix: need at least two rows");
  }
  const ColumnStats stats = column_stats(d.x);
  CorrelationMatrix cm;
  cm.feature_names = d.feature_names;
  cm.zero_variance = stats.zero_variance;
  pearson_kernel(d.x, stats, cm.r, cm.defined);
  return cm;
}

PruneResult prune_correlated(const Dataset& d, double threshold,
                             bool keep_one) {
  if (!(threshold > 0.0) || !(threshold <= 1.0)) {
    throw std::invalid_argument("prune_correlated: threshold must be in (0, 1]");
  }
  const CorrelationMatrix cm = pearson_matrix(d);
  const std::size_t nf = d.n_features();
  std::vector<std::uint8_t> removed(nf, 0);

  PruneResult out;
  for (std::size_t j = 0; j < nf; ++j) {
    if (cm.zero_variance[j]) {
      removed[j] = 1;
      out.removed_zero_variance.push_back(d.feature_names[j]);
    }
  }
  std::vector<std::uint8_t> correlated(nf, 0);
  if (keep_one) {
    // Greedy by index: drop a feature only if it clashes with one already kept.
    for (std::size_t j = 0; j < nf; ++j) {
      if (removed[j]) continue;
      for (std::size_t i = 0; i < j; ++i) {
        if (removed[i] || correlated[i]) continue;
        if (cm.is_defined(i, j) && std::fabs(cm.r(i, j)) >= threshold) {
          correlated[j] = 1;
          break;
        }
      }
    }
  } else {
    // Default: both members of every flagged pair go.
    for (std::size_t i = 0; i < nf; ++i) {
      if (removed[i]) continue;
      for (std::size_t j = i + 1; j < nf; ++j) {
        if (removed[j]) continue;
        if (cm.is_defined(i, j) && std::fabs(cm.r(i, j)) >= threshold) {
          correlated[i] = 1;
          correlated[j] = 1;
        }
      }
    }
  }
  std::vector<std::string> kept;
  for (std::size_t j = 0; j < nf; ++j) {
    if (removed[j]) continue;
    if (correlated[j]) {
      out.removed_correlated.push_back(d.feature_names[j]);
    } else {
      kept.push_back(d.feature_names[j]);
    }
  }
  if (kept.empty()) {
    throw DataError("prune_correlated: pruning would remove every feature");
  }
  out.dataset = select_features(d, kept);
  return out;
}

SplitResult split(const Dataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0)) {
    throw std::invalid_argument("split: test_fraction must be in (0, 1)");
  }
  std::vector<std::size_t> train_rows, test_rows;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> idx;
    for (std::size_t r = 0; r < d.n_rows(); ++r) {
      if (d.y[r] == cls) idx.push_back(r);
    }
    if (idx.empty()) {
      throw DataError("split: class " + std::to_string(cls) + " has no rows");
    }
    const auto n_test = static_cast<std::size_t>(std::llround(
        test_fraction * static_cast<double>(idx.size())));
    if (n_test == 0 || n_test == idx.size()) {
      throw DataError("split: class " + std::to_string(cls) +
                      " too small to appear in both partitions");
    }
    Rng rng(derive_seed(seed, streams::kSplit, static_cast<std::uint64_t>(cls)));
    rng.shuffle(idx);
    test_rows.insert(test_rows.end(), idx.begin(), idx.begin() + n_test);
    train_rows.insert(train_rows.end(), idx.begin() + n_test, idx.end());
  }
  // Restore original row order inside each partition so downstream code sees
  // a stable, seed-independent layout given the same membership.
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());

  auto take = [&](const std::vector<std::size_t>& rows) {
    Dataset out;
    out.feature_names = d.feature_names;
    out.x = Matrix(rows.size(), d.n_features());
    out.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double* src = d.x.row_ptr(rows[i]);
      std::copy(src, src + d.n_features(), out.x.row_ptr(i));
      out.y.push_back(d.y[rows[i]]);
    }
    return out;
  };
  return {take(train_rows), take(test_rows)};
}

StandardizeParams standardize_fit(const Dataset& train) {
  if (train.n_rows() == 0) throw DataError("standardize_fit: empty dataset");
  const ColumnStats s = column_stats(train.x);
  return {s.mean, s.sd, s.zero_variance};
}

Matrix standardize_apply(const StandardizeParams& p, const Matrix& x) {
  if (x.cols != p.mean.size()) {
    throw std::invalid_argument("standardize_apply: column count mismatch");
  }
  Matrix out(x.rows, x.cols);
  for (std::size_t j = 0; j < x.cols; ++j) {
    if (p.zero_variance[j]) {
      for (std::size_t r = 0; r < x.rows; ++r) out(r, j) = 0.0;
    } else {
      for (std::size_t r = 0; r < x.rows; ++r) {
        out(r, j) = (x(r, j) - p.mean[j]) / p.sd[j];
      }
    }
  }
  return out;
}

StandardizeParams standardize(Dataset& train, Dataset& test) {
  const StandardizeParams p = standardize_fit(train);
  train.x = standardize_apply(p, train.x);
  test.x = standardize_apply(p, test.x);
  return p;
}

Dataset select_features(const Dataset& d, const std::vector<std::string>& names) {
  std::vector<std::size_t> cols;
  cols.reserve(names.size());
  for (const std::string& n : names) {
    const auto it = std::find(d.feature_names.begin(), d.feature_names.end(), n);
    if (it == d.feature_names.end()) {
      throw std::invalid_argument("select_features: unknown feature '" + n + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - d.feature_names.begin()));
  }
  Dataset out;
  out.feature_names = names;
  out.x = Matrix(d.n_rows(), cols.size());
  out.y = d.y;
  for (std::size_t r = 0; r < d.n_rows(); ++r) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.x(r, k) = d.x(r, cols[k]);
    }
  }
  return out;
}

}  // namespace xaudit
