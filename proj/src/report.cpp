#include "xaudit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "xaudit/common.hpp"

namespace xaudit {

namespace {

using nlohmann::json;

std::vector<std::string> undefined_names(const MetricFlags& f) {
  std::vector<std::string> out;
  if (f.balanced_accuracy) out.push_back("balanced_accuracy");
  if (f.f1) out.push_back("f1");
  if (f.mcc) out.push_back("mcc");
  if (f.precision) out.push_back("precision");
  if (f.recall) out.push_back("recall");
  return out;
}

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json to_json(const ConfusionMatrix& cm) {
  return json{{"tp", cm.tp}, {"fn", cm.fn}, {"fp", cm.fp}, {"tn", cm.tn}};
}

json to_json(const MetricSet& s) {
  return json{{"accuracy", s.accuracy},
              {"balanced_accuracy", s.balanced_accuracy},
              {"f1", s.f1},
              {"precision", s.precision},
              {"recall", s.recall},
              {"mcc", s.mcc},
              {"undefined", undefined_names(s.undefined)}};
}

json to_json(const ImbalanceProfile& p) {
  return json{{"total", p.total},
              {"positives", p.positives},
              {"majority_fraction", p.majority_fraction},
              {"degree", imbalance_degree_name(p.degree)}};
}

json to_json(const ImportanceVector& v) {
  return json{{"method", importance_method_name(v.method)},
              {"feature_names", v.feature_names},
              {"scores", v.scores},
              {"seed", v.seed},
              {"repeats", v.repeats},
              {"samples", v.samples},
              {"degenerate", v.degenerate}};
}

json to_json(const ShapMatrix& s) {
  return json{{"feature_names", s.feature_names},
              {"values", matrix_rows(s.values)},
              {"base_value", s.base_value},
              {"seed", s.seed},
              {"n_coalitions", s.n_coalitions},
              {"exhaustive", s.exhaustive}};
}

json to_json(const TopKSet& t) {
  return json{{"k", t.k},
              {"features", t.features},
              {"indices", t.indices},
              {"clamped", t.clamped},
              {"source_model", t.source_model},
              {"source_method", t.source_method},
              {"source_hyper", t.source_hyper},
              {"seed", t.seed}};
}

json to_json(const TransferReport& r) {
  return json{{"schema_version", kSchemaVersion},
              {"source", to_json(r.source)},
              {"features", r.features},
              {"repeats", r.repeats},
              {"mean", to_json(r.mean)},
              {"variance", to_json(r.variance)},
              {"run_mcc", r.run_mcc},
              {"threshold", r.threshold},
              {"transferable", r.transferable}};
}

json to_json(const ConsistencyReport& r) {
  json runs = json::array();
  for (const SweepRun& run : r.runs) {
    runs.push_back(json{{"delta", run.delta},
                        {"seed", run.seed},
                        {"top_k", to_json(run.top)},
                        {"metrics", to_json(run.metrics)}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"runs", runs},
              {"pairwise_jaccard", matrix_rows(r.pairwise_jaccard)},
              {"mean_jaccard", r.mean_jaccard},
              {"performance_deltas", to_json(r.max_delta)},
              {"summary", to_json(performance_delta_summary(r))}};
}

json to_json(const DeltaSummary& s) {
  return json{{"standard_metrics_max_delta", s.standard_metrics_max_delta},
              {"mcc_max_delta", s.mcc_max_delta},
              {"explanation_mean_jaccard", s.explanation_mean_jaccard}};
}

json to_json(const ToyAlignmentReport& r) {
  const auto variant = [](const ToyVariantResult& v) {
    return json{{"coefficient_top", v.coefficient_top},
                {"gradient_top", v.gradient_top},
                {"grad_mean_abs_t", v.grad_mean_abs_t},
                {"grad_mean_abs_h", v.grad_mean_abs_h}};
  };
  return json{{"schema_version", kSchemaVersion},
              {"c1", r.c1},
              {"c2", r.c2},
              {"threshold", r.threshold},
              {"step", variant(r.step)},
              {"smooth", variant(r.smooth)}};
}

std::string canonical_dump(const json& j) {
  return j.dump(2) + "\n";
}

std::string markdown_metric_table(
    const std::vector<std::pair<std::string, MetricSet>>& columns) {
  std::ostringstream os;
  os << "| metric |";
  for (const auto& [name, unused] : columns) os << ' ' << name << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) os << "---|";
  os << '\n';
  struct Row {
    const char* label;
    double MetricSet::* field;
  };
  const Row rows[] = {
      {"accuracy", &MetricSet::accuracy},
      {"balanced accuracy", &MetricSet::balanced_accuracy},
      {"precision", &MetricSet::precision},
      {"recall", &MetricSet::recall},
      {"F1", &MetricSet::f1},
      {"MCC", &MetricSet::mcc},
  };
  for (const Row& row : rows) {
    os << "| " << row.label << " |";
    for (const auto& [unused, s] : columns) os << ' ' << fmt(s.*row.field) << " |";
    os << '\n';
  }
  return os.str();
}

std::string markdown_importance_table(const ImportanceVector& v,
                                      std::size_t max_rows) {
  std::vector<std::size_t> order(v.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](std::size_t a, std::size_t b) {
                     const double fa = std::fabs(v.scores[a]);
                     const double fb = std::fabs(v.scores[b]);
                     if (fa != fb) return fa > fb;
                     return a < b;
                   });
  std::ostringstream os;
  os << "| rank | feature | score (" << importance_method_name(v.method)
     << ") |\n|---|---|---|\n";
  const std::size_t n = std::min(max_rows, order.size());
  for (std::size_t i = 0; i < n; ++i) {
    os << "| " << (i + 1) << " | " << v.feature_names[order[i]] << " | "
       << fmt(v.scores[order[i]]) << " |\n";
  }
  return os.str();
}

std::string markdown_transfer(const TransferReport& r) {
  std::ostringstream os;
  os << "# Cross-explanation transferability\n\n";
  os << "Source: " << r.source.source_model << " + " << r.source.source_method
     << " (" << r.source.source_hyper << "), seed " << r.source.seed << "\n\n";
  os << "Top-" << r.source.k << " features:";
  for (const std::string& f : r.features) os << ' ' << f;
  os << "\n\nReceiver: default decision tree, " << r.repeats
     << " repeats on fresh splits.\n\n";
  os << markdown_metric_table({{"mean", r.mean}, {"variance", r.variance}});
  os << "\nMean MCC " << fmt(r.mean.mcc) << " vs threshold "
     << fmt(r.threshold) << ": **"
     << (r.transferable ? "transferable" : "not transferable") << "**\n";
  return os.str();
}

std::string markdown_sweep(const ConsistencyReport& r) {
  std::ostringstream os;
  os << "# Consistency sweep\n\n";
  os << "| run | delta | seed | top-k | accuracy | MCC |\n"
     << "|---|---|---|---|---|---|\n";
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const SweepRun& run = r.runs[i];
    os << "| " << i << " | " << run.delta << " | " << run.seed << " | ";
    for (std::size_t j = 0; j < run.top.features.size(); ++j) {
      os << (j ? " " : "") << run.top.features[j];
    }
    os << " | " << fmt(run.metrics.accuracy) << " | " << fmt(run.metrics.mcc)
       << " |\n";
  }
  const DeltaSummary s = performance_delta_summary(r);
  os << "\nMean pairwise Jaccard of top-k sets: " << fmt(r.mean_jaccard)
     << "\n\nMax deltas: standard metrics " << fmt(s.standard_metrics_max_delta)
     << ", MCC " << fmt(s.mcc_max_delta) << "\n";
  return os.str();
}

std::string markdown_toy(const ToyAlignmentReport& r) {
  std::ostringstream os;
  os << "# Two-feature alignment demo\n\n";
  os << "c1 = " << fmt(r.c1) << ", c2 = " << fmt(r.c2)
     << ", threshold = " << fmt(r.threshold) << "\n\n";
  os << "| variant | coefficient top | gradient top | mean |dT| | mean |dH| "
        "|\n|---|---|---|---|---|\n";
  const auto row = [&os](const char* name, const ToyVariantResult& v) {
    os << "| " << name << " | " << v.coefficient_top << " | " << v.gradient_top
       << " | " << fmt(v.grad_mean_abs_t) << " | " << fmt(v.grad_mean_abs_h)
       << " |\n";
  };
  row("step", r.step);
  row("smooth", r.smooth);
  return os.str();
}

std::string svg_importance(const ImportanceVector& v, std::size_t max_bars) {
  std::vector<std::size_t> order(v.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](std::size_t a, std::size_t b) {
                     const double fa = std::fabs(v.scores[a]);
                     const double fb = std::fabs(v.scores[b]);
                     if (fa != fb) return fa > fb;
                     return a < b;
                   });
  const std::size_t n = std::min(max_bars, order.size());
  double max_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_abs = std::max(max_abs, std::fabs(v.scores[order[i]]));
  }
  if (max_abs == 0.0) max_abs = 1.0;  // degenerate vector: zero-width bars

  constexpr double kBarH = 18.0, kGap = 6.0, kLeft = 190.0, kBarMax = 360.0;
  constexpr double kTop = 34.0;
  const double height = kTop + static_cast<double>(n) * (kBarH + kGap) + 10.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\""
     << fmt(height, "%.0f") << "\" font-family=\"sans-serif\">\n";
  os << "  <text x=\"8\" y=\"20\" font-size=\"14\">Top features by |"
     << importance_method_name(v.method) << "|</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t f = order[i];
    const double y = kTop + static_cast<double>(i) * (kBarH + kGap);
    const double w = std::fabs(v.scores[f]) / max_abs * kBarMax;
    const char* color = v.scores[f] < 0.0 ? "#d65f5f" : "#4878d0";
    os << "  <text x=\"" << fmt(kLeft - 6.0, "%.1f") << "\" y=\""
       << fmt(y + 13.0, "%.1f")
       << "\" font-size=\"12\" text-anchor=\"end\">" << v.feature_names[f]
       << "</text>\n";
    os << "  <rect x=\"" << fmt(kLeft, "%.1f") << "\" y=\"" << fmt(y, "%.1f")
       << "\" width=\"" << fmt(w, "%.2f") << "\" height=\""
       << fmt(kBarH, "%.0f") << "\" fill=\"" << color << "\"/>\n";
    os << "  <text x=\"" << fmt(kLeft + w + 5.0, "%.2f") << "\" y=\""
       << fmt(y + 13.0, "%.1f") << "\" font-size=\"11\">"
       << fmt(v.scores[f], "%.4g") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.write(content.data(),
            static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace xaudit
