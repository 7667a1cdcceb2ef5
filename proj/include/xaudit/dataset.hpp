// Tabular binary-classification data: loading, profiling, pruning, splitting.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xaudit/matrix.hpp"

namespace xaudit {

struct Dataset {
  std::vector<std::string> feature_names;
  Matrix x;                // n_rows * n_features
  std::vector<int> y;      // 0 = negative/benign, 1 = positive

  std::size_t n_rows() const { return x.rows; }
  std::size_t n_features() const { return x.cols; }
};

struct CsvOptions {
  std::string label_column = "Label";
  std::vector<std::string> positive_labels;  // label cell in set -> 1, else 0
  std::vector<std::string> drop_columns;     // dropped before parsing cells
};

/// Loads a CSV (UTF-8, mandatory header, comma delimiter, '.' decimals).
/// Every retained cell must parse as a finite double; the label column is
/// matched as a string against positive_labels. Throws DataError with a
/// row/column diagnostic on any malformed input, a missing or ambiguous
/// label column, or duplicate retained feature names.
Dataset load_csv(const std::string& path, const CsvOptions& options);

/// Writes features plus an integer label column. Cells are formatted with 17
/// significant digits so load_csv round-trips them bit-exactly.
void write_csv(const Dataset& d, const std::string& path,
               const std::string& label_column = "Label");

// --- Class-imbalance profile --------------------------------------------

enum class ImbalanceDegree { kBalanced, kMild, kModerate, kSevere, kExtreme };

std::string imbalance_degree_name(ImbalanceDegree d);

/// Majority fraction m -> degree. Bands: m < 0.60 Balanced, [0.60, 0.75)
/// Mild, [0.75, 0.85) Moderate, [0.85, 0.99) Severe, >= 0.99 Extreme.
ImbalanceDegree classify_imbalance(double majority_fraction);

struct ImbalanceProfile {
  std::uint64_t total = 0;
  std::uint64_t positives = 0;
  double majority_fraction = 0.0;
  ImbalanceDegree degree = ImbalanceDegree::kBalanced;
};

ImbalanceProfile profile_imbalance(const Dataset& d);  // DataError if empty

// --- Pearson correlation profile ----------------------------------------

struct CorrelationMatrix {
  std::vector<std::string> feature_names;
  Matrix r;                             // d*d, 0 where undefined
  std::vector<std::uint8_t> defined;    // d*d flags
  std::vector<std::uint8_t> zero_variance;  // per column

  bool is_defined(std::size_t i, std::size_t j) const {
    return defined[i * r.cols + j] != 0;
  }
};

/// Population-moment Pearson correlation between all feature pairs.
/// Needs at least two rows. Pairs touching a constant column are flagged
/// undefined rather than reported as zero.
CorrelationMatrix pearson_matrix(const Dataset& d);

// --- Redundancy pruning ---------------------------------------------------

struct PruneResult {
  Dataset dataset;
  std::vector<std::string> removed_correlated;
  std::vector<std::string> removed_zero_variance;
};

/// Removes features involved in |r| >= threshold pairs. By default *both*
/// members of a flagged pair are dropped; keep_one retains the lower-index
/// member of each pair instead (greedy, by feature index). Zero-variance
/// columns are always dropped and reported separately. Throws DataError if
/// nothing would remain.
PruneResult prune_correlated(const Dataset& d, double threshold = 0.95,
                             bool keep_one = false);

// --- Stratified split -----------------------------------------------------

struct SplitResult {
  Dataset train;
  Dataset test;
};

/// Seeded stratified split: per-class row counts are rounded independently so
/// class proportions are preserved within one row. Throws DataError when a
/// class is too small to appear in both partitions.
SplitResult split(const Dataset& d, double test_fraction, std::uint64_t seed);

// --- Standardization -------------------------------------------------------

struct StandardizeParams {
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<std::uint8_t> zero_variance;
};

/// Fits column means/sds (population) on the training partition only.
StandardizeParams standardize_fit(const Dataset& train);

/// (x - mean) / sd per column; zero-variance columns map to exactly 0.
Matrix standardize_apply(const StandardizeParams& p, const Matrix& x);

/// Convenience: fit on train, transform both partitions in place.
StandardizeParams standardize(Dataset& train, Dataset& test);

/// Returns a copy of d restricted to the named columns (in the given order).
/// Unknown names throw std::invalid_argument.
Dataset select_features(const Dataset& d, const std::vector<std::string>& names);

}  // namespace xaudit
