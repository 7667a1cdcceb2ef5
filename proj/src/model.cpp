#include "xaudit/model.hpp"

#include <sstream>
#include <stdexcept>

#include "xaudit/rng.hpp"

namespace xaudit {

namespace {

using nlohmann::json;

Matrix standardized_copy(const TrainedModel& m, const Matrix& x) {
  if (!m.standardization) return x;
  return standardize_apply(*m.standardization, x);
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw std::invalid_argument("matrix_from_json: shape mismatch");
  }
  return m;
}

json tree_to_json(const DecisionTree& t) {
  json nodes = json::array();
  for (const TreeNode& n : t.nodes) {
    nodes.push_back(json{{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"impurity", n.impurity},
                         {"samples", n.samples},
                         {"count0", n.class_counts[0]},
                         {"count1", n.class_counts[1]},
                         {"left", n.left},
                         {"right", n.right}});
  }
  return json{{"criterion",
               t.params.criterion == SplitCriterion::kGini ? "gini" : "entropy"},
              {"max_depth", t.params.max_depth ? json(*t.params.max_depth)
                                               : json(nullptr)},
              {"min_samples_split", t.params.min_samples_split},
              {"n_features", t.n_features},
              {"n_training_rows", t.n_training_rows},
              {"nodes", nodes}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  t.params.criterion = j.at("criterion").get<std::string>() == "entropy"
                           ? SplitCriterion::kEntropy
                           : SplitCriterion::kGini;
  if (!j.at("max_depth").is_null()) {
    t.params.max_depth = j.at("max_depth").get<int>();
  }
  t.params.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  t.n_features = j.at("n_features").get<std::size_t>();
  t.n_training_rows = j.at("n_training_rows").get<std::size_t>();
  for (const json& nj : j.at("nodes")) {
    TreeNode n;
    n.feature = nj.at("feature").get<int>();
    n.threshold = nj.at("threshold").get<double>();
    n.impurity = nj.at("impurity").get<double>();
    n.samples = nj.at("samples").get<std::size_t>();
    n.class_counts = {nj.at("count0").get<std::uint64_t>(),
                      nj.at("count1").get<std::uint64_t>()};
    n.left = nj.at("left").get<int>();
    n.right = nj.at("right").get<int>();
    t.nodes.push_back(n);
  }
  return t;
}

json standardize_to_json(const StandardizeParams& p) {
  return json{{"mean", p.mean},
              {"sd", p.sd},
              {"zero_variance", p.zero_variance}};
}

StandardizeParams standardize_from_json(const json& j) {
  StandardizeParams p;
  p.mean = j.at("mean").get<std::vector<double>>();
  p.sd = j.at("sd").get<std::vector<double>>();
  p.zero_variance = j.at("zero_variance").get<std::vector<std::uint8_t>>();
  return p;
}

}  // namespace

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::kDecisionTree: return "dt";
    case ModelKind::kRidge: return "ridge";
    case ModelKind::kMlp: return "mlp";
  }
  return "dt";
}

ModelKind model_kind_from_name(const std::string& n) {
  if (n == "dt") return ModelKind::kDecisionTree;
  if (n == "ridge") return ModelKind::kRidge;
  if (n == "mlp") return ModelKind::kMlp;
  throw std::invalid_argument("unknown model kind '" + n +
                              "' (expected dt, ridge, or mlp)");
}

std::string FitOptions::summary(ModelKind kind) const {
  std::ostringstream os;
  switch (kind) {
    case ModelKind::kDecisionTree:
      os << "criterion="
         << (dt.criterion == SplitCriterion::kGini ? "gini" : "entropy");
      if (dt.max_depth) os << ",max_depth=" << *dt.max_depth;
      os << ",min_samples_split=" << dt.min_samples_split;
      break;
    case ModelKind::kRidge:
      os << "alpha=" << ridge_alpha;
      break;
    case ModelKind::kMlp:
      os << "optimizer=" << optimizer_name(mlp.optimizer)
         << ",lr=" << mlp.learning_rate << ",batch=" << mlp.batch_size
         << ",epochs=" << mlp.epochs;
      break;
  }
  return os.str();
}

TrainedModel fit_model(ModelKind kind, const Dataset& train,
                       const FitOptions& options, std::uint64_t seed) {
  TrainedModel m;
  m.kind = kind;
  m.feature_names = train.feature_names;
  m.seed = seed;
  if (kind == ModelKind::kDecisionTree) {
    m.model = train_dt(train, options.dt);
    return m;
  }
  Dataset scaled = train;
  const StandardizeParams p = standardize_fit(train);
  scaled.x = standardize_apply(p, train.x);
  m.standardization = p;
  if (kind == ModelKind::kRidge) {
    m.model = train_ridge(scaled, options.ridge_alpha);
  } else {
    m.model = train_mlp(scaled, options.mlp, derive_seed(seed, streams::kFit));
  }
  return m;
}

std::vector<int> predict_labels(const TrainedModel& m, const Matrix& x) {
  if (x.cols != m.n_features()) {
    throw std::invalid_argument("predict_labels: feature count mismatch");
  }
  const Matrix z = standardized_copy(m, x);
  switch (m.kind) {
    case ModelKind::kDecisionTree:
      return std::get<DecisionTree>(m.model).predict(z);
    case ModelKind::kRidge:
      return std::get<RidgeModel>(m.model).predict(z);
    case ModelKind::kMlp:
      return std::get<MlpModel>(m.model).predict(z);
  }
  return {};
}

std::vector<double> explanation_output(const TrainedModel& m, const Matrix& x) {
  if (x.cols != m.n_features()) {
    throw std::invalid_argument("explanation_output: feature count mismatch");
  }
  const Matrix z = standardized_copy(m, x);
  switch (m.kind) {
    case ModelKind::kDecisionTree:
      return std::get<DecisionTree>(m.model).predict_proba(z);
    case ModelKind::kRidge:
      return std::get<RidgeModel>(m.model).score(z);
    case ModelKind::kMlp:
      return std::get<MlpModel>(m.model).forward(z);
  }
  return {};
}

ImportanceVector intrinsic_importance(const TrainedModel& m,
                                      ImportanceMethod method) {
  ImportanceVector v;
  v.method = method;
  v.feature_names = m.feature_names;
  if (method == ImportanceMethod::kDtImpurity) {
    if (m.kind != ModelKind::kDecisionTree) {
      throw std::invalid_argument(
          "intrinsic_importance: DT_FI applies to decision trees only");
    }
    v.scores = dt_impurity_importances(std::get<DecisionTree>(m.model));
  } else if (method == ImportanceMethod::kRidgeCoefficient) {
    if (m.kind != ModelKind::kRidge) {
      throw std::invalid_argument(
          "intrinsic_importance: RIDGE_FC applies to ridge models only");
    }
    v.scores = std::get<RidgeModel>(m.model).coefficients;
  } else {
    throw std::invalid_argument(
        "intrinsic_importance: not an intrinsic method");
  }
  finalize_degeneracy(v);
  return v;
}

nlohmann::json model_to_json(const TrainedModel& m) {
  json j;
  j["kind"] = model_kind_name(m.kind);
  j["feature_names"] = m.feature_names;
  j["seed"] = m.seed;
  j["standardization"] = m.standardization
                             ? standardize_to_json(*m.standardization)
                             : json(nullptr);
  switch (m.kind) {
    case ModelKind::kDecisionTree:
      j["model"] = tree_to_json(std::get<DecisionTree>(m.model));
      break;
    case ModelKind::kRidge: {
      const RidgeModel& r = std::get<RidgeModel>(m.model);
      j["model"] = json{{"coefficients", r.coefficients},
                        {"intercept", r.intercept},
                        {"alpha", r.alpha}};
      break;
    }
    case ModelKind::kMlp: {
      const MlpModel& n = std::get<MlpModel>(m.model);
      j["model"] = json{{"w1", matrix_to_json(n.w1)},
                        {"w2", matrix_to_json(n.w2)},
                        {"w3", matrix_to_json(n.w3)},
                        {"b1", n.b1},
                        {"b2", n.b2},
                        {"b3", n.b3},
                        {"optimizer", optimizer_name(n.hyper.optimizer)},
                        {"learning_rate", n.hyper.learning_rate},
                        {"batch_size", n.hyper.batch_size},
                        {"epochs", n.hyper.epochs},
                        {"epoch_losses", n.epoch_losses}};
      break;
    }
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  m.kind = model_kind_from_name(j.at("kind").get<std::string>());
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("standardization").is_null()) {
    m.standardization = standardize_from_json(j.at("standardization"));
  }
  const json& mj = j.at("model");
  switch (m.kind) {
    case ModelKind::kDecisionTree:
      m.model = tree_from_json(mj);
      break;
    case ModelKind::kRidge: {
      RidgeModel r;
      r.coefficients = mj.at("coefficients").get<std::vector<double>>();
      r.intercept = mj.at("intercept").get<double>();
      r.alpha = mj.at("alpha").get<double>();
      m.model = r;
      break;
    }
    case ModelKind::kMlp: {
      MlpModel n;
      n.w1 = matrix_from_json(mj.at("w1"));
      n.w2 = matrix_from_json(mj.at("w2"));
      n.w3 = matrix_from_json(mj.at("w3"));
      n.b1 = mj.at("b1").get<std::vector<double>>();
      n.b2 = mj.at("b2").get<std::vector<double>>();
      n.b3 = mj.at("b3").get<std::vector<double>>();
      n.hyper.optimizer = mj.at("optimizer").get<std::string>() == "adam"
                              ? Optimizer::kAdam
                              : Optimizer::kRmsProp;
      n.hyper.learning_rate = mj.at("learning_rate").get<double>();
      n.hyper.batch_size = mj.at("batch_size").get<std::size_t>();
      n.hyper.epochs = mj.at("epochs").get<std::size_t>();
      n.epoch_losses = mj.at("epoch_losses").get<std::vector<double>>();
      m.model = n;
      break;
    }
  }
  return m;
}

}  // namespace xaudit
