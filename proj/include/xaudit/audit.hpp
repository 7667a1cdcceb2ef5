// Cross-explanation audits: does a top-k feature set chosen by one
// (model, explanation) pair still support a competent model, and how stable
// are rankings and performance under configuration perturbations?
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xaudit/dataset.hpp"
#include "xaudit/explain.hpp"
#include "xaudit/importance.hpp"
#include "xaudit/metrics.hpp"
#include "xaudit/model.hpp"

namespace xaudit {

// --- Top-k selection ---------------------------------------------------------

struct TopKSet {
  std::uint64_t k = 3;
  std::vector<std::string> features;  // by |score| desc, ties by index
  std::vector<std::size_t> indices;
  bool clamped = false;  // k exceeded the feature count
  // Provenance, filled by the audit drivers.
  std::string source_model;
  std::string source_method;
  std::string source_hyper;
  std::uint64_t seed = 0;
};

/// Ranks by absolute score, descending; ties fall back to the lower feature
/// index. Throws std::invalid_argument for k = 0 and DataError when the
/// vector is degenerate — auditing an arbitrary feature subset would be
/// indistinguishable from a real ranking downstream.
TopKSet top_k(const ImportanceVector& v, std::uint64_t k = 3);

/// |A intersect B| / |A union B| over feature-name sets; 1 when both empty.
double jaccard(const std::vector<std::string>& a,
               const std::vector<std::string>& b);

// --- Transferability ---------------------------------------------------------

/// A feature set is called transferable when a default decision tree
/// retrained on it alone reaches this mean test MCC.
inline constexpr double kTransferMccThreshold = 0.95;

struct TransferReport {
  TopKSet source;
  std::vector<std::string> features;
  std::uint64_t repeats = 0;
  MetricSet mean;      // per-metric mean over repeats
  MetricSet variance;  // population variance (undefined flags: OR over runs)
  std::vector<double> run_mcc;
  double threshold = kTransferMccThreshold;
  bool transferable = false;
};

/// Receiver protocol: `repeats` times, re-split the restricted dataset with a
/// fresh derived seed, train a default decision tree on the named features
/// only, and score it on the held-out rows. Fresh splits each repeat measure
/// the feature subset, not one lucky partition.
TransferReport transfer_features(const Dataset& d,
                                 const std::vector<std::string>& features,
                                 std::uint64_t repeats, std::uint64_t seed,
                                 double test_fraction = 0.15);

// --- Cross-explanation audit --------------------------------------------------

struct SourceSpec {
  ModelKind model = ModelKind::kRidge;
  ImportanceMethod method = ImportanceMethod::kRidgeCoefficient;
};

struct AuditOptions {
  double test_fraction = 0.15;
  FitOptions fit;
  std::uint64_t pi_repeats = 10;
  MetricSelector pi_metric = MetricSelector::kMcc;
  std::uint64_t shap_instances = 50;  // explained rows, sampled from test
  std::uint64_t shap_samples = 2048;  // sampled-path coalition budget
  std::uint64_t transfer_repeats = 10;
};

/// Extracts the requested importance vector from an already-trained model:
/// intrinsic methods read the model, PI shuffles `test`, SHAP uses `train`
/// rows as background and explains instances sampled from `test`.
ImportanceVector audit_importance(const TrainedModel& model,
                                  const Dataset& train, const Dataset& test,
                                  ImportanceMethod method,
                                  const AuditOptions& options,
                                  std::uint64_t seed);

/// End-to-end audit: split, fit the source model, extract its importance
/// vector with the requested method, take the top-k features, and run the
/// receiver protocol on them. Intrinsic methods must match the model family;
/// the toy-demo methods (COEFFICIENT, GRADIENT) are rejected here.
TransferReport cross_explain(const Dataset& d, const SourceSpec& source,
                             std::uint64_t k, std::uint64_t seed,
                             const AuditOptions& options = {});

// --- Consistency sweep ---------------------------------------------------------

struct RunConfig {
  ModelKind model = ModelKind::kMlp;
  ImportanceMethod method = ImportanceMethod::kShapGlobal;
  AuditOptions options;  // test fraction, hyperparameters, PI/SHAP budgets
  std::uint64_t master_seed = 1;
};

/// One knob tweak relative to the base config. An unset field keeps the base
/// value. `seed` pins the run's training/explanation seed explicitly;
/// otherwise run i derives its seed from the master seed.
struct ConfigDelta {
  std::optional<std::uint64_t> seed;
  std::optional<double> test_fraction;
  std::optional<Optimizer> optimizer;
  std::optional<std::size_t> batch_size;
  std::optional<double> learning_rate;
  std::optional<std::size_t> epochs;
  std::optional<double> ridge_alpha;
  std::optional<int> max_depth;

  std::string describe() const;  // "base" when nothing is set
};

struct SweepRun {
  std::string delta;
  std::uint64_t seed = 0;
  TopKSet top;
  MetricSet metrics;  // on that run's test split
};

struct ConsistencyReport {
  std::vector<SweepRun> runs;
  Matrix pairwise_jaccard;   // runs * runs, diagonal 1
  double mean_jaccard = 0.0; // mean over distinct unordered pairs
  MetricSet max_delta;       // per metric: max spread across runs
};

/// Executes the base config plus every variation (>= 2 runs required).
/// The train/test split derives from (master seed, test fraction) alone, so
/// runs with the same ratio share the exact split and seed deltas isolate
/// training/explanation stochasticity; a ratio delta reshuffles. Identical
/// config + seed therefore reproduces a run exactly (pairwise Jaccard 1).
/// A failing run aborts the sweep with its index and delta in the message.
ConsistencyReport consistency_sweep(const Dataset& d, const RunConfig& base,
                                    const std::vector<ConfigDelta>& variations,
                                    std::uint64_t k = 3);

struct DeltaSummary {
  double standard_metrics_max_delta = 0.0;  // accuracy/F1/precision/recall
  double mcc_max_delta = 0.0;
  double explanation_mean_jaccard = 0.0;
};

/// The sweep's headline triple: how far ordinary metrics moved, how far MCC
/// moved, and how much the explanations agreed.
DeltaSummary performance_delta_summary(const ConsistencyReport& r);

}  // namespace xaudit
