#include "xaudit/audit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "xaudit/common.hpp"
#include "xaudit/rng.hpp"

namespace xaudit {

namespace {

void check_method_applicability(ModelKind model, ImportanceMethod method) {
  switch (method) {
    case ImportanceMethod::kDtImpurity:
      if (model != ModelKind::kDecisionTree) {
        throw std::invalid_argument(
            "DT_FI is intrinsic to decision trees; pick PI or SHAP_GLOBAL "
            "for other families");
      }
      return;
    case ImportanceMethod::kRidgeCoefficient:
      if (model != ModelKind::kRidge) {
        throw std::invalid_argument(
            "RIDGE_FC is intrinsic to ridge models; pick PI or SHAP_GLOBAL "
            "for other families");
      }
      return;
    case ImportanceMethod::kPermutation:
    case ImportanceMethod::kShapGlobal:
      return;
    case ImportanceMethod::kCoefficient:
    case ImportanceMethod::kGradient:
      throw std::invalid_argument(
          "COEFFICIENT/GRADIENT exist only for the two-feature demo models");
  }
}

Matrix sample_rows(const Matrix& x, std::uint64_t want, std::uint64_t seed) {
  if (x.rows <= want) return x;
  std::vector<std::size_t> idx(x.rows);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::uint64_t t = 0; t < want; ++t) {
    const std::size_t j =
        static_cast<std::size_t>(t) +
        static_cast<std::size_t>(rng.below(x.rows - t));
    std::swap(idx[t], idx[j]);
  }
  idx.resize(want);
  std::sort(idx.begin(), idx.end());
  Matrix out(want, x.cols);
  for (std::size_t r = 0; r < want; ++r) {
    const double* src = x.row_ptr(idx[r]);
    std::copy(src, src + x.cols, out.row_ptr(r));
  }
  return out;
}

struct MetricAccumulator {
  std::vector<MetricSet> runs;

  void add(const MetricSet& s) { runs.push_back(s); }

  static double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) /
           static_cast<double>(v.size());
  }
  static double var_of(const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size());
  }

  void summarize(MetricSet& mean, MetricSet& variance) const {
    constexpr double MetricSet::* kFields[] = {
        &MetricSet::accuracy, &MetricSet::balanced_accuracy, &MetricSet::f1,
        &MetricSet::precision, &MetricSet::recall, &MetricSet::mcc};
    for (double MetricSet::* field : kFields) {
      std::vector<double> v;
      v.reserve(runs.size());
      for (const MetricSet& s : runs) v.push_back(s.*field);
      const double mu = mean_of(v);
      mean.*field = mu;
      variance.*field = var_of(v, mu);
    }
    for (const MetricSet& s : runs) {
      mean.undefined.balanced_accuracy |= s.undefined.balanced_accuracy;
      mean.undefined.f1 |= s.undefined.f1;
      mean.undefined.precision |= s.undefined.precision;
      mean.undefined.recall |= s.undefined.recall;
      mean.undefined.mcc |= s.undefined.mcc;
    }
    variance.undefined = mean.undefined;
  }
};

}  // namespace

ImportanceVector audit_importance(const TrainedModel& model,
                                  const Dataset& train, const Dataset& test,
                                  ImportanceMethod method,
                                  const AuditOptions& options,
                                  std::uint64_t seed) {
  switch (method) {
    case ImportanceMethod::kDtImpurity:
    case ImportanceMethod::kRidgeCoefficient:
      return intrinsic_importance(model, method);
    case ImportanceMethod::kPermutation:
      return permutation_importance(model, test, options.pi_metric,
                                    options.pi_repeats,
                                    derive_seed(seed, streams::kExplain));
    case ImportanceMethod::kShapGlobal: {
      const Matrix instances =
          sample_rows(test.x, options.shap_instances,
                      derive_seed(seed, streams::kShapInstances));
      const ShapMatrix s =
          kernel_shap(model, train.x, instances, options.shap_samples,
                      derive_seed(seed, streams::kExplain));
      return global_shap_importance(s);
    }
    case ImportanceMethod::kCoefficient:
    case ImportanceMethod::kGradient:
      break;
  }
  throw std::invalid_argument("audit_importance: inapplicable method");
}

TopKSet top_k(const ImportanceVector& v, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("top_k: k must be >= 1");
  if (v.scores.size() != v.feature_names.size()) {
    throw std::invalid_argument("top_k: malformed importance vector");
  }
  if (v.degenerate || v.scores.empty()) {
    throw DataError(
        "top_k: importance vector is degenerate (all scores zero) — a top-k "
        "selection from it would be arbitrary");
  }
  std::vector<std::size_t> order(v.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&v](std::size_t a, std::size_t b) {
                     const double fa = std::fabs(v.scores[a]);
                     const double fb = std::fabs(v.scores[b]);
                     if (fa != fb) return fa > fb;
                     return a < b;
                   });
  TopKSet out;
  out.k = k;
  out.clamped = k > order.size();
  const std::size_t take = std::min<std::size_t>(k, order.size());
  for (std::size_t i = 0; i < take; ++i) {
    out.indices.push_back(order[i]);
    out.features.push_back(v.feature_names[order[i]]);
  }
  out.source_method = importance_method_name(v.method);
  out.seed = v.seed;
  return out;
}

double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  const std::set<std::string> sa(a.begin(), a.end());
  const std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const std::string& s : sa) inter += sb.count(s);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

TransferReport transfer_features(const Dataset& d,
                                 const std::vector<std::string>& features,
                                 std::uint64_t repeats, std::uint64_t seed,
                                 double test_fraction) {
  if (repeats == 0) {
    throw std::invalid_argument("transfer_features: repeats must be >= 1");
  }
  if (features.empty()) {
    throw std::invalid_argument("transfer_features: empty feature set");
  }
  // Restrict columns in the parent dataset's order so the receiver is a pure
  // function of the feature *set*; the given (rank) order is kept for the
  // report only.
  std::vector<std::string> ordered = features;
  std::sort(ordered.begin(), ordered.end(),
            [&d](const std::string& a, const std::string& b) {
              const auto pa =
                  std::find(d.feature_names.begin(), d.feature_names.end(), a);
              const auto pb =
                  std::find(d.feature_names.begin(), d.feature_names.end(), b);
              return pa < pb;
            });
  const Dataset restricted = select_features(d, ordered);

  TransferReport report;
  report.features = features;
  report.repeats = repeats;
  MetricAccumulator acc;
  for (std::uint64_t r = 0; r < repeats; ++r) {
    const SplitResult sr =
        split(restricted, test_fraction, derive_seed(seed, streams::kReceiver, r));
    const DecisionTree tree = train_dt(sr.train, DtParams{});
    const MetricSet s =
        score(confusion(sr.test.y, tree.predict(sr.test.x)));
    acc.add(s);
    report.run_mcc.push_back(s.mcc);
  }
  acc.summarize(report.mean, report.variance);
  report.transferable = report.mean.mcc >= kTransferMccThreshold;
  return report;
}

TransferReport cross_explain(const Dataset& d, const SourceSpec& source,
                             std::uint64_t k, std::uint64_t seed,
                             const AuditOptions& options) {
  check_method_applicability(source.model, source.method);
  const SplitResult sr = split(d, options.test_fraction, seed);
  const TrainedModel model = fit_model(source.model, sr.train, options.fit, seed);
  const ImportanceVector imp =
      audit_importance(model, sr.train, sr.test, source.method, options, seed);
  TopKSet tk = top_k(imp, k);
  tk.source_model = model_kind_name(source.model);
  tk.source_hyper = options.fit.summary(source.model);
  tk.seed = seed;

  TransferReport report = transfer_features(
      d, tk.features, options.transfer_repeats,
      derive_seed(seed, streams::kReceiver), options.test_fraction);
  report.source = tk;
  return report;
}

std::string ConfigDelta::describe() const {
  std::ostringstream os;
  const char* sep = "";
  auto emit = [&os, &sep](const std::string& text) {
    os << sep << text;
    sep = ",";
  };
  if (seed) emit("seed=" + std::to_string(*seed));
  if (test_fraction) emit("test_fraction=" + format_compact(*test_fraction));
  if (optimizer) emit("optimizer=" + optimizer_name(*optimizer));
  if (batch_size) emit("batch_size=" + std::to_string(*batch_size));
  if (learning_rate) emit("learning_rate=" + format_compact(*learning_rate));
  if (epochs) emit("epochs=" + std::to_string(*epochs));
  if (ridge_alpha) emit("ridge_alpha=" + format_compact(*ridge_alpha));
  if (max_depth) emit("max_depth=" + std::to_string(*max_depth));
  const std::string s = os.str();
  return s.empty() ? "base" : s;
}

ConsistencyReport consistency_sweep(const Dataset& d, const RunConfig& base,
                                    const std::vector<ConfigDelta>& variations,
                                    std::uint64_t k) {
  if (variations.empty()) {
    throw std::invalid_argument(
        "consistency_sweep: need at least one variation beside the base run");
  }
  check_method_applicability(base.model, base.method);

  ConsistencyReport report;
  const std::size_t n_runs = variations.size() + 1;
  for (std::size_t i = 0; i < n_runs; ++i) {
    static const ConfigDelta kBaseDelta{};
    const ConfigDelta& delta = i == 0 ? kBaseDelta : variations[i - 1];

    RunConfig cfg = base;
    AuditOptions& opt = cfg.options;
    if (delta.test_fraction) opt.test_fraction = *delta.test_fraction;
    if (delta.optimizer) opt.fit.mlp.optimizer = *delta.optimizer;
    if (delta.batch_size) opt.fit.mlp.batch_size = *delta.batch_size;
    if (delta.learning_rate) opt.fit.mlp.learning_rate = *delta.learning_rate;
    if (delta.epochs) opt.fit.mlp.epochs = *delta.epochs;
    if (delta.ridge_alpha) opt.fit.ridge_alpha = *delta.ridge_alpha;
    if (delta.max_depth) opt.fit.dt.max_depth = *delta.max_depth;

    const std::uint64_t run_seed =
        delta.seed ? *delta.seed
                   : derive_seed(base.master_seed, streams::kSweepRun, i);
    // The split depends on (master seed, ratio) only: runs at the same ratio
    // score on the identical partition, so a seed delta can move metrics only
    // through training/explanation stochasticity, not through resampling.
    const std::uint64_t split_seed =
        derive_seed(base.master_seed, streams::kSweepSplit,
                    std::bit_cast<std::uint64_t>(opt.test_fraction));
    try {
      const SplitResult sr = split(d, opt.test_fraction, split_seed);
      const TrainedModel model =
          fit_model(cfg.model, sr.train, opt.fit, run_seed);
      const MetricSet metrics =
          score(confusion(sr.test.y, predict_labels(model, sr.test.x)));
      const ImportanceVector imp =
          audit_importance(model, sr.train, sr.test, cfg.method, opt, run_seed);
      TopKSet tk = top_k(imp, k);
      tk.source_model = model_kind_name(cfg.model);
      tk.source_hyper = opt.fit.summary(cfg.model);
      tk.seed = run_seed;

      SweepRun run;
      run.delta = delta.describe();
      run.seed = run_seed;
      run.top = std::move(tk);
      run.metrics = metrics;
      report.runs.push_back(std::move(run));
    } catch (const std::exception& e) {
      throw std::runtime_error("consistency_sweep: run " + std::to_string(i) +
                               " (" + delta.describe() + ") failed: " +
                               e.what());
    }
  }

  report.pairwise_jaccard = Matrix(n_runs, n_runs, 1.0);
  double acc = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < n_runs; ++i) {
    for (std::size_t j = i + 1; j < n_runs; ++j) {
      const double jac =
          jaccard(report.runs[i].top.features, report.runs[j].top.features);
      report.pairwise_jaccard(i, j) = jac;
      report.pairwise_jaccard(j, i) = jac;
      acc += jac;
      ++pairs;
    }
  }
  report.mean_jaccard = acc / static_cast<double>(pairs);

  const auto spread = [&report](double MetricSet::* field) {
    double lo = report.runs.front().metrics.*field;
    double hi = lo;
    for (const SweepRun& r : report.runs) {
      lo = std::min(lo, r.metrics.*field);
      hi = std::max(hi, r.metrics.*field);
    }
    return hi - lo;
  };
  report.max_delta.accuracy = spread(&MetricSet::accuracy);
  report.max_delta.balanced_accuracy = spread(&MetricSet::balanced_accuracy);
  report.max_delta.f1 = spread(&MetricSet::f1);
  report.max_delta.precision = spread(&MetricSet::precision);
  report.max_delta.recall = spread(&MetricSet::recall);
  report.max_delta.mcc = spread(&MetricSet::mcc);
  return report;
}

DeltaSummary performance_delta_summary(const ConsistencyReport& r) {
  DeltaSummary s;
  s.standard_metrics_max_delta =
      std::max({r.max_delta.accuracy, r.max_delta.f1, r.max_delta.precision,
                r.max_delta.recall});
  s.mcc_max_delta = r.max_delta.mcc;
  s.explanation_mean_jaccard = r.mean_jaccard;
  return s;
}

}  // namespace xaudit
