// Uniform wrapper over the three classifier families, including the
// preprocessing each one expects: trees consume raw features, ridge and the
// MLP consume train-standardized features. The wrapper owns that contract so
// explainers and audits can stay model-agnostic.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "xaudit/dataset.hpp"
#include "xaudit/importance.hpp"
#include "xaudit/mlp.hpp"
#include "xaudit/ridge.hpp"
#include "xaudit/tree.hpp"

namespace xaudit {

enum class ModelKind { kDecisionTree, kRidge, kMlp };

std::string model_kind_name(ModelKind k);           // "dt", "ridge", "mlp"
ModelKind model_kind_from_name(const std::string& n);  // throws on unknown

struct FitOptions {
  DtParams dt;
  double ridge_alpha = 1.0;
  MlpHyper mlp;

  /// One-line summary of the knobs relevant to `kind` (for report metadata).
  std::string summary(ModelKind kind) const;
};

struct TrainedModel {
  ModelKind kind = ModelKind::kDecisionTree;
  std::variant<DecisionTree, RidgeModel, MlpModel> model;
  /// Present for ridge/MLP; raw-feature models carry none.
  std::optional<StandardizeParams> standardization;
  std::vector<std::string> feature_names;
  std::uint64_t seed = 0;

  std::size_t n_features() const { return feature_names.size(); }
};

/// Trains `kind` on `train`, fitting standardization on the training rows
/// only where the family requires it.
TrainedModel fit_model(ModelKind kind, const Dataset& train,
                       const FitOptions& options, std::uint64_t seed);

/// Hard 0/1 labels on raw-feature rows (standardization applied internally).
std::vector<int> predict_labels(const TrainedModel& m, const Matrix& x);

/// Continuous explanation target on raw-feature rows: leaf class-1 frequency
/// for trees, the *raw linear score* for ridge (so additive attributions of
/// this output coincide exactly with coefficient attributions), and the
/// sigmoid output for the MLP.
std::vector<double> explanation_output(const TrainedModel& m, const Matrix& x);

/// Intrinsic importances (DT impurity decrease or ridge coefficients).
/// Throws std::invalid_argument when the method does not match the family.
ImportanceVector intrinsic_importance(const TrainedModel& m,
                                      ImportanceMethod method);

/// Lossless round-trip serialization (canonical JSON, sorted keys).
nlohmann::json model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace xaudit
