// Confusion-matrix metrics for binary classification, with explicit handling
// of every degenerate denominator and an extended Matthews correlation
// coefficient that stays defined on one-sided matrices.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace xaudit {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fn = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fn + fp + tn; }
};

/// Labels must be 0/1 and the spans equally sized and non-empty;
/// anything else throws std::invalid_argument.
ConfusionMatrix confusion(std::span<const int> y_true,
                          std::span<const int> y_pred);

/// Per-metric "the textbook denominator was zero" flags. A flagged metric
/// carries the convention value (0, or the extension value for MCC) and must
/// not be compared against thresholds as if it were measured.
struct MetricFlags {
  bool balanced_accuracy = false;
  bool f1 = false;
  bool precision = false;
  bool recall = false;
  bool mcc = false;

  bool any() const {
    return balanced_accuracy || f1 || precision || recall || mcc;
  }
};

struct MetricSet {
  double accuracy = 0.0;
  double balanced_accuracy = 0.0;  // mean of recall and specificity
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double mcc = 0.0;
  MetricFlags undefined;
};

/// Computes all six metrics. Degenerate denominators: precision/recall/F1
/// report 0 with the flag set; balanced accuracy averages whichever of its
/// two terms is defined (flagging if one was not). MCC uses the extension:
/// when the matrix is concentrated in exactly one cell it is +1 for a
/// diagonal cell (tp or tn), -1 for an off-diagonal cell (fp or fn), and 0
/// for the remaining undefined shapes — always flagged. Products inside the
/// MCC root are taken in extended precision so counts near 2^53 survive.
/// Throws std::invalid_argument on the all-zero matrix.
MetricSet score(const ConfusionMatrix& cm);

/// fn / (tp + fn): the fraction of actual positives classified benign.
/// The name mirrors how intrusion reports quote this rate from the benign
/// operator's point of view. Throws std::invalid_argument when tp + fn = 0.
double false_positive_rate_benign(const ConfusionMatrix& cm);

// --- Metric selection (for permutation importance, sweeps, reports) -------

enum class MetricSelector {
  kAccuracy,
  kBalancedAccuracy,
  kF1,
  kPrecision,
  kRecall,
  kMcc,
};

std::string metric_name(MetricSelector m);
double metric_value(const MetricSet& s, MetricSelector m);
bool metric_undefined(const MetricSet& s, MetricSelector m);

// --- MCC guarantee probe ----------------------------------------------------

struct MccCounterexample {
  ConfusionMatrix cm;
  MetricSet metrics;
  std::vector<std::string> failing;  // metrics defined but below the threshold
};

/// Searches small-count confusion matrices (tp, fn, fp in [0, max_small],
/// tn drawn from tn_ladder) for cases where MCC clears mcc_threshold while
/// some other defined metric does not: evidence that a high MCC bounds the
/// rest, while no converse holds. Flag-undefined metrics are skipped — the
/// probe is about measured values, not conventions. Deterministic order.
/// Throws std::invalid_argument unless 0 < mcc_threshold < 1.
std::vector<MccCounterexample> mcc_guarantee_probe(
    double mcc_threshold, std::uint64_t max_small,
    const std::vector<std::uint64_t>& tn_ladder);

}  // namespace xaudit
