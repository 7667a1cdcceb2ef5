#include "xaudit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xaudit {

ConfusionMatrix confusion(std::span<const int> y_true,
                          std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("confusion: size mismatch");
  }
  if (y_true.empty()) throw std::invalid_argument("confusion: empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw std::invalid_argument("confusion: labels must be 0 or 1");
    }
    if (t == 1) {
      p == 1 ? ++cm.tp : ++cm.fn;
    } else {
      p == 1 ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MetricSet score(const ConfusionMatrix& cm) {
  if (cm.total() == 0) {
    throw std::invalid_argument("score: all-zero confusion matrix");
  }
  MetricSet s;
  const double tp = static_cast<double>(cm.tp);
  const double fn = static_cast<double>(cm.fn);
  const double fp = static_cast<double>(cm.fp);
  const double tn = static_cast<double>(cm.tn);

  s.accuracy = (tp + tn) / static_cast<double>(cm.total());

  const bool has_pos = cm.tp + cm.fn > 0;
  const bool has_neg = cm.tn + cm.fp > 0;
  if (has_pos) {
    s.recall = tp / (tp + fn);
  } else {
    s.undefined.recall = true;
  }
  if (cm.tp + cm.fp > 0) {
    s.precision = tp / (tp + fp);
  } else {
    s.undefined.precision = true;
  }
  if (2 * cm.tp + cm.fp + cm.fn > 0) {
    s.f1 = 2.0 * tp / (2.0 * tp + fp + fn);
  } else {
    s.undefined.f1 = true;
  }
  // Balanced accuracy = mean of sensitivity and specificity; with one class
  // absent it degrades to the defined term, flagged. Both absent cannot
  // happen for a non-empty matrix.
  const double sensitivity = has_pos ? tp / (tp + fn) : 0.0;
  const double specificity = has_neg ? tn / (tn + fp) : 0.0;
  if (has_pos && has_neg) {
    s.balanced_accuracy = 0.5 * (sensitivity + specificity);
  } else {
    s.balanced_accuracy = has_pos ? sensitivity : specificity;
    s.undefined.balanced_accuracy = true;
  }

  const bool mcc_defined = (cm.tp + cm.fp) > 0 && (cm.tp + cm.fn) > 0 &&
                           (cm.tn + cm.fp) > 0 && (cm.tn + cm.fn) > 0;
  if (mcc_defined) {
    // Widened arithmetic: each pairwise sum fits a uint64, their product can
    // overflow a double's integer range, so the root is taken in long double.
    const long double a = static_cast<long double>(cm.tp + cm.fp);
    const long double b = static_cast<long double>(cm.tp + cm.fn);
    const long double c = static_cast<long double>(cm.tn + cm.fp);
    const long double d = static_cast<long double>(cm.tn + cm.fn);
    const long double num = static_cast<long double>(tp) * tn -
                            static_cast<long double>(fp) * fn;
    const long double mcc = num / std::sqrt(a * b * c * d);
    s.mcc = std::clamp(static_cast<double>(mcc), -1.0, 1.0);
  } else {
    // Extension: a matrix concentrated in exactly one cell represents perfect
    // (one-sided) agreement or disagreement; other degenerate shapes carry no
    // signal and map to 0. Always flagged as convention, not measurement.
    const bool only_tp = cm.tp > 0 && cm.fn == 0 && cm.fp == 0 && cm.tn == 0;
    const bool only_tn = cm.tn > 0 && cm.fn == 0 && cm.fp == 0 && cm.tp == 0;
    const bool only_fp = cm.fp > 0 && cm.tp == 0 && cm.fn == 0 && cm.tn == 0;
    const bool only_fn = cm.fn > 0 && cm.tp == 0 && cm.fp == 0 && cm.tn == 0;
    if (only_tp || only_tn) {
      s.mcc = 1.0;
    } else if (only_fp || only_fn) {
      s.mcc = -1.0;
    } else {
      s.mcc = 0.0;
    }
    s.undefined.mcc = true;
  }
  return s;
}

double false_positive_rate_benign(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0) {
    throw std::invalid_argument(
        "false_positive_rate_benign: no actual positives");
  }
  return static_cast<double>(cm.fn) / static_cast<double>(cm.tp + cm.fn);
}

std::string metric_name(MetricSelector m) {
  switch (m) {
    case MetricSelector::kAccuracy: return "accuracy";
    case MetricSelector::kBalancedAccuracy: return "balanced_accuracy";
    case MetricSelector::kF1: return "f1";
    case MetricSelector::kPrecision: return "precision";
    case MetricSelector::kRecall: return "recall";
    case MetricSelector::kMcc: return "mcc";
  }
  return "mcc";
}

double metric_value(const MetricSet& s, MetricSelector m) {
  switch (m) {
    case MetricSelector::kAccuracy: return s.accuracy;
    case MetricSelector::kBalancedAccuracy: return s.balanced_accuracy;
    case MetricSelector::kF1: return s.f1;
    case MetricSelector::kPrecision: return s.precision;
    case MetricSelector::kRecall: return s.recall;
    case MetricSelector::kMcc: return s.mcc;
  }
  return s.mcc;
}

bool metric_undefined(const MetricSet& s, MetricSelector m) {
  switch (m) {
    case MetricSelector::kAccuracy: return false;
    case MetricSelector::kBalancedAccuracy: return s.undefined.balanced_accuracy;
    case MetricSelector::kF1: return s.undefined.f1;
    case MetricSelector::kPrecision: return s.undefined.precision;
    case MetricSelector::kRecall: return s.undefined.recall;
    case MetricSelector::kMcc: return s.undefined.mcc;
  }
  return false;
}

std::vector<MccCounterexample> mcc_guarantee_probe(
    double mcc_threshold, std::uint64_t max_small,
    const std::vector<std::uint64_t>& tn_ladder) {
  if (!(mcc_threshold > 0.0) || !(mcc_threshold < 1.0)) {
    throw std::invalid_argument(
        "mcc_guarantee_probe: threshold must be in (0, 1)");
  }
  std::vector<MccCounterexample> out;
  for (std::uint64_t tp = 0; tp <= max_small; ++tp) {
    for (std::uint64_t fn = 0; fn <= max_small; ++fn) {
      for (std::uint64_t fp = 0; fp <= max_small; ++fp) {
        for (std::uint64_t tn : tn_ladder) {
          const ConfusionMatrix cm{tp, fn, fp, tn};
          if (cm.total() == 0) continue;
          const MetricSet s = score(cm);
          if (s.undefined.mcc || s.mcc < mcc_threshold) continue;
          std::vector<std::string> failing;
          const MetricSelector others[] = {
              MetricSelector::kAccuracy, MetricSelector::kBalancedAccuracy,
              MetricSelector::kF1, MetricSelector::kPrecision,
              MetricSelector::kRecall};
          for (MetricSelector sel : others) {
            if (metric_undefined(s, sel)) continue;
            if (metric_value(s, sel) < mcc_threshold) {
              failing.push_back(metric_name(sel));
            }
          }
          if (!failing.empty()) {
            out.push_back({cm, s, std::move(failing)});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace xaudit
