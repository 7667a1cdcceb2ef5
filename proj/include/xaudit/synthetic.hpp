// Seeded synthetic tabular data with known ground truth: informative
// columns, pure-noise columns, and planted near-duplicate column pairs.
#pragma once

#include <cstdint>

#include "xaudit/dataset.hpp"

namespace xaudit {

struct SyntheticSpec {
  std::size_t n_rows = 1000;
  std::size_t n_informative = 3;   // named inf_0, inf_1, ...
  std::size_t n_noise = 0;         // named noise_0, ...
  std::size_t n_correlated_pairs = 0;  // named corr_k_base / corr_k_twin
  /// Difference between the class means in *every* informative dimension
  /// (per-dimension, not Euclidean); all columns have unit noise.
  double class_separation = 2.0;
  double positive_fraction = 0.5;  // strictly inside (0, 1)
  /// Twin = base + N(0, correlation_noise); 0.05 gives |r| about 0.9988.
  double correlation_noise = 0.05;
};

/// Deterministic for a given (spec, seed): each column draws from its own
/// derived stream, so changing one knob never disturbs the other columns.
/// The positive count is exactly round(n_rows * positive_fraction), with
/// label positions shuffled by seed. Throws std::invalid_argument on an
/// unsatisfiable spec (no columns, out-of-range fractions, a class rounding
/// to zero rows, non-positive separation/noise, fewer than two rows).
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace xaudit
