// xaudit: reproducible audits of feature-based explanations on tabular
// binary classification data. Every subcommand writes canonical JSON (plus
// Markdown/SVG where a table or chart makes sense) into one output directory;
// rerunning with identical inputs reproduces the bytes.
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "xaudit/audit.hpp"
#include "xaudit/common.hpp"
#include "xaudit/dataset.hpp"
#include "xaudit/explain.hpp"
#include "xaudit/metrics.hpp"
#include "xaudit/model.hpp"
#include "xaudit/report.hpp"
#include "xaudit/rng.hpp"
#include "xaudit/synthetic.hpp"

namespace {

using nlohmann::json;
using namespace xaudit;

// --- shared option bundles -------------------------------------------------

struct CommonArgs {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--seed", a.seed, "master seed for every random stream")
      ->capture_default_str();
  cmd->add_option("--out-dir", a.out_dir, "directory for report files")
      ->envname("XAUDIT_OUT_DIR")
      ->capture_default_str();
}

struct DataArgs {
  std::string csv;
  std::string label = "Label";
  std::vector<std::string> positive{"1"};
  std::vector<std::string> drop;
  bool use_synth = false;
  SyntheticSpec synth;
  bool prune = false;
  double prune_threshold = 0.95;
};

void add_data(CLI::App* cmd, DataArgs& a, bool with_prune = true) {
  cmd->add_option("--csv", a.csv, "CSV dataset path (mutually exclusive with --synth)");
  cmd->add_option("--label", a.label, "label column name")->capture_default_str();
  cmd->add_option("--positive", a.positive,
                  "label values mapped to class 1 (repeatable)")
      ->capture_default_str();
  cmd->add_option("--drop", a.drop, "columns to drop before parsing (repeatable)");
  cmd->add_flag("--synth", a.use_synth, "generate a synthetic dataset instead");
  cmd->add_option("--rows", a.synth.n_rows, "synthetic: row count")
      ->capture_default_str();
  cmd->add_option("--informative", a.synth.n_informative,
                  "synthetic: informative feature count")
      ->capture_default_str();
  cmd->add_option("--noise", a.synth.n_noise, "synthetic: noise feature count")
      ->capture_default_str();
  cmd->add_option("--pairs", a.synth.n_correlated_pairs,
                  "synthetic: planted correlated pair count")
      ->capture_default_str();
  cmd->add_option("--separation", a.synth.class_separation,
                  "synthetic: per-dimension class mean separation")
      ->capture_default_str();
  cmd->add_option("--positive-fraction", a.synth.positive_fraction,
                  "synthetic: fraction of class-1 rows")
      ->capture_default_str();
  cmd->add_option("--corr-noise", a.synth.correlation_noise,
                  "synthetic: twin-column jitter sd")
      ->capture_default_str();
  if (with_prune) {
    cmd->add_flag("--prune", a.prune,
                  "drop zero-variance and strongly correlated features first");
    cmd->add_option("--prune-threshold", a.prune_threshold,
                    "|r| at or above which features are dropped")
        ->capture_default_str();
  }
}

struct LoadedData {
  Dataset d;
  json desc;
};

LoadedData load_data(const DataArgs& a, std::uint64_t seed) {
  if (a.use_synth == !a.csv.empty()) {
    throw std::invalid_argument("choose exactly one dataset source: --csv or --synth");
  }
  LoadedData out;
  if (a.use_synth) {
    out.d = generate_synthetic(a.synth, seed);
    out.desc = json{{"source", "synthetic"},
                    {"rows", a.synth.n_rows},
                    {"informative", a.synth.n_informative},
                    {"noise", a.synth.n_noise},
                    {"correlated_pairs", a.synth.n_correlated_pairs},
                    {"class_separation", a.synth.class_separation},
                    {"positive_fraction", a.synth.positive_fraction},
                    {"correlation_noise", a.synth.correlation_noise},
                    {"seed", seed}};
  } else {
    CsvOptions opt;
    opt.label_column = a.label;
    opt.positive_labels = a.positive;
    opt.drop_columns = a.drop;
    out.d = load_csv(a.csv, opt);
    out.desc = json{{"source", "csv"},
                    {"path", a.csv},
                    {"label", a.label},
                    {"positive", a.positive},
                    {"drop", a.drop}};
  }
  if (a.prune) {
    PruneResult pr = prune_correlated(out.d, a.prune_threshold);
    out.desc["prune"] = json{{"threshold", a.prune_threshold},
                             {"removed_correlated", pr.removed_correlated},
                             {"removed_zero_variance", pr.removed_zero_variance}};
    out.d = std::move(pr.dataset);
  }
  return out;
}

struct ModelArgs {
  std::string model = "mlp";
  std::string criterion = "gini";
  int max_depth = 0;  // 0 = unlimited
  std::size_t min_samples_split = 2;
  double alpha = 1.0;
  std::string optimizer = "rmsprop";
  double learning_rate = 0.001;
  std::size_t batch_size = 256;
  std::size_t epochs = 5;
};

void add_model(CLI::App* cmd, ModelArgs& a, bool allow_all) {
  const std::string choices = allow_all ? "dt, ridge, mlp, or all" : "dt, ridge, or mlp";
  cmd->add_option("--model", a.model, "model family: " + choices)
      ->capture_default_str();
  cmd->add_option("--criterion", a.criterion, "decision tree: gini or entropy")
      ->capture_default_str();
  cmd->add_option("--max-depth", a.max_depth,
                  "decision tree: depth cap (0 = unlimited)")
      ->capture_default_str();
  cmd->add_option("--min-samples-split", a.min_samples_split,
                  "decision tree: minimum rows to split")
      ->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "ridge: L2 strength")->capture_default_str();
  cmd->add_option("--optimizer", a.optimizer, "mlp: rmsprop or adam")
      ->capture_default_str();
  cmd->add_option("--lr", a.learning_rate, "mlp: learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", a.batch_size, "mlp: mini-batch size")
      ->capture_default_str();
  cmd->add_option("--epochs", a.epochs, "mlp: training epochs")
      ->capture_default_str();
}

SplitCriterion parse_criterion(const std::string& s) {
  if (s == "gini") return SplitCriterion::kGini;
  if (s == "entropy") return SplitCriterion::kEntropy;
  throw std::invalid_argument("unknown criterion '" + s + "' (gini or entropy)");
}

Optimizer parse_optimizer(const std::string& s) {
  if (s == "rmsprop") return Optimizer::kRmsProp;
  if (s == "adam") return Optimizer::kAdam;
  throw std::invalid_argument("unknown optimizer '" + s + "' (rmsprop or adam)");
}

FitOptions to_fit(const ModelArgs& a) {
  FitOptions f;
  f.dt.criterion = parse_criterion(a.criterion);
  if (a.max_depth < 0) throw std::invalid_argument("--max-depth must be >= 0");
  if (a.max_depth > 0) f.dt.max_depth = a.max_depth;
  f.dt.min_samples_split = a.min_samples_split;
  f.ridge_alpha = a.alpha;
  f.mlp.optimizer = parse_optimizer(a.optimizer);
  f.mlp.learning_rate = a.learning_rate;
  f.mlp.batch_size = a.batch_size;
  f.mlp.epochs = a.epochs;
  return f;
}

ImportanceMethod parse_method(const std::string& s) {
  if (s == "dt_fi") return ImportanceMethod::kDtImpurity;
  if (s == "ridge_fc") return ImportanceMethod::kRidgeCoefficient;
  if (s == "pi") return ImportanceMethod::kPermutation;
  if (s == "shap") return ImportanceMethod::kShapGlobal;
  throw std::invalid_argument("unknown method '" + s +
                              "' (dt_fi, ridge_fc, pi, or shap)");
}

MetricSelector parse_metric(const std::string& s) {
  if (s == "accuracy") return MetricSelector::kAccuracy;
  if (s == "balanced_accuracy") return MetricSelector::kBalancedAccuracy;
  if (s == "f1") return MetricSelector::kF1;
  if (s == "precision") return MetricSelector::kPrecision;
  if (s == "recall") return MetricSelector::kRecall;
  if (s == "mcc") return MetricSelector::kMcc;
  throw std::invalid_argument("unknown metric '" + s + "'");
}

std::string out_path(const CommonArgs& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  return (std::filesystem::path(c.out_dir) / name).string();
}

void emit(const CommonArgs& c, const std::string& name,
          const std::string& content) {
  const std::string path = out_path(c, name);
  write_text_file(path, content);
  std::cout << "wrote " << path << '\n';
}

ConfigDelta parse_vary(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw std::invalid_argument("--vary expects key=value, got '" + spec + "'");
  }
  const std::string key = spec.substr(0, eq);
  const std::string val = spec.substr(eq + 1);
  ConfigDelta d;
  try {
    if (key == "seed") {
      d.seed = std::stoull(val);
    } else if (key == "split" || key == "test_fraction") {
      d.test_fraction = std::stod(val);
    } else if (key == "optimizer") {
      d.optimizer = parse_optimizer(val);
    } else if (key == "batch_size" || key == "batch") {
      d.batch_size = std::stoull(val);
    } else if (key == "lr" || key == "learning_rate") {
      d.learning_rate = std::stod(val);
    } else if (key == "epochs") {
      d.epochs = std::stoull(val);
    } else if (key == "alpha" || key == "ridge_alpha") {
      d.ridge_alpha = std::stod(val);
    } else if (key == "max_depth") {
      d.max_depth = std::stoi(val);
    } else {
      throw std::invalid_argument("unknown --vary key '" + key + "'");
    }
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("--vary value out of range: '" + spec + "'");
  }
  return d;
}

// --- subcommand handlers ------------------------------------------------------

struct SynthArgs {
  CommonArgs common;
  SyntheticSpec spec;
  std::string name = "synth.csv";
};

void run_synth(const SynthArgs& a) {
  const Dataset d = generate_synthetic(a.spec, a.common.seed);
  const std::string csv_path = out_path(a.common, a.name);
  write_csv(d, csv_path);
  std::cout << "wrote " << csv_path << '\n';
  const ImbalanceProfile p = profile_imbalance(d);
  json j{{"schema_version", kSchemaVersion},
         {"csv", a.name},
         {"seed", a.common.seed},
         {"rows", a.spec.n_rows},
         {"informative", a.spec.n_informative},
         {"noise", a.spec.n_noise},
         {"correlated_pairs", a.spec.n_correlated_pairs},
         {"class_separation", a.spec.class_separation},
         {"positive_fraction", a.spec.positive_fraction},
         {"correlation_noise", a.spec.correlation_noise},
         {"feature_names", d.feature_names},
         {"positives", p.positives}};
  emit(a.common, "synth.json", canonical_dump(j));
}

struct ProfileArgs {
  CommonArgs common;
  DataArgs data;
  double threshold = 0.95;
};

void run_profile(const ProfileArgs& a) {
  const LoadedData ld = load_data(a.data, a.common.seed);
  const ImbalanceProfile imb = profile_imbalance(ld.d);
  const CorrelationMatrix cm = pearson_matrix(ld.d);

  json pairs = json::array();
  for (std::size_t i = 0; i < ld.d.n_features(); ++i) {
    for (std::size_t j = i + 1; j < ld.d.n_features(); ++j) {
      if (!cm.is_defined(i, j)) continue;
      if (std::fabs(cm.r(i, j)) < a.threshold) continue;
      pairs.push_back(json{{"a", cm.feature_names[i]},
                           {"b", cm.feature_names[j]},
                           {"r", cm.r(i, j)}});
    }
  }
  json zero_var = json::array();
  for (std::size_t i = 0; i < ld.d.n_features(); ++i) {
    if (cm.zero_variance[i]) zero_var.push_back(cm.feature_names[i]);
  }
  json j{{"schema_version", kSchemaVersion},
         {"dataset", ld.desc},
         {"imbalance", to_json(imb)},
         {"correlation", json{{"threshold", a.threshold},
                              {"strong_pairs", pairs},
                              {"zero_variance", zero_var}}}};
  emit(a.common, "profile.json", canonical_dump(j));

  std::string md = "# Dataset profile\n\n";
  md += "Rows: " + std::to_string(imb.total) + ", positives: " +
        std::to_string(imb.positives) + ", majority fraction: " +
        format_compact(imb.majority_fraction) + ", degree: **" +
        imbalance_degree_name(imb.degree) + "**\n\n";
  md += "Strongly correlated pairs (|r| >= " + format_compact(a.threshold) +
        "): " + std::to_string(pairs.size()) + "\n";
  emit(a.common, "profile.md", md);
}

struct TrainArgs {
  CommonArgs common;
  DataArgs data;
  ModelArgs model;
  double test_fraction = 0.15;
};

void run_train(const TrainArgs& a) {
  const LoadedData ld = load_data(a.data, a.common.seed);
  const SplitResult sr = split(ld.d, a.test_fraction, a.common.seed);
  const FitOptions fit = to_fit(a.model);

  std::vector<ModelKind> kinds;
  if (a.model.model == "all") {
    kinds = {ModelKind::kDecisionTree, ModelKind::kRidge, ModelKind::kMlp};
  } else {
    kinds = {model_kind_from_name(a.model.model)};
  }

  json models;
  std::vector<std::pair<std::string, MetricSet>> columns;
  for (ModelKind kind : kinds) {
    const TrainedModel m = fit_model(kind, sr.train, fit, a.common.seed);
    const ConfusionMatrix cm =
        confusion(sr.test.y, predict_labels(m, sr.test.x));
    const MetricSet s = score(cm);
    models[model_kind_name(kind)] = json{{"hyper", fit.summary(kind)},
                                         {"confusion", to_json(cm)},
                                         {"metrics", to_json(s)}};
    columns.emplace_back(model_kind_name(kind), s);
  }
  json j{{"schema_version", kSchemaVersion},
         {"dataset", ld.desc},
         {"seed", a.common.seed},
         {"test_fraction", a.test_fraction},
         {"train_rows", sr.train.n_rows()},
         {"test_rows", sr.test.n_rows()},
         {"models", models}};
  emit(a.common, "train.json", canonical_dump(j));
  emit(a.common, "train.md",
       "# Test-split metrics\n\n" + markdown_metric_table(columns));
}

struct ExplainArgs {
  CommonArgs common;
  DataArgs data;
  ModelArgs model;
  std::string method = "shap";
  double test_fraction = 0.15;
  std::uint64_t pi_repeats = 10;
  std::string pi_metric = "mcc";
  bool pi_on_train = false;
  std::uint64_t shap_instances = 50;
  std::uint64_t shap_samples = 2048;
};

void run_explain(const ExplainArgs& a) {
  const LoadedData ld = load_data(a.data, a.common.seed);
  const SplitResult sr = split(ld.d, a.test_fraction, a.common.seed);
  const ModelKind kind = model_kind_from_name(a.model.model);
  const ImportanceMethod method = parse_method(a.method);
  const FitOptions fit = to_fit(a.model);
  const TrainedModel m = fit_model(kind, sr.train, fit, a.common.seed);

  AuditOptions opts;
  opts.test_fraction = a.test_fraction;
  opts.fit = fit;
  opts.pi_repeats = a.pi_repeats;
  opts.pi_metric = parse_metric(a.pi_metric);
  opts.shap_instances = a.shap_instances;
  opts.shap_samples = a.shap_samples;
  // Train-set PI is an explicit opt-in; the default measures generalization.
  const Dataset& eval = a.pi_on_train ? sr.train : sr.test;
  const ImportanceVector imp =
      audit_importance(m, sr.train, eval, method, opts, a.common.seed);

  json j{{"schema_version", kSchemaVersion},
         {"dataset", ld.desc},
         {"seed", a.common.seed},
         {"test_fraction", a.test_fraction},
         {"model", model_kind_name(kind)},
         {"hyper", fit.summary(kind)},
         {"pi_on_train", a.pi_on_train},
         {"importance", to_json(imp)}};
  emit(a.common, "explain.json", canonical_dump(j));
  emit(a.common, "explain.md",
       "# Feature importance\n\n" + markdown_importance_table(imp));
  emit(a.common, "explain.svg", svg_importance(imp));
}

struct CrossExplainArgs {
  CommonArgs common;
  DataArgs data;
  ModelArgs model;
  std::string method = "ridge_fc";
  std::uint64_t k = 3;
  double test_fraction = 0.15;
  std::uint64_t repeats = 10;
  std::uint64_t pi_repeats = 10;
  std::string pi_metric = "mcc";
  std::uint64_t shap_instances = 50;
  std::uint64_t shap_samples = 2048;
};

void run_cross_explain(const CrossExplainArgs& a) {
  const LoadedData ld = load_data(a.data, a.common.seed);
  SourceSpec source;
  source.model = model_kind_from_name(a.model.model);
  source.method = parse_method(a.method);
  AuditOptions opts;
  opts.test_fraction = a.test_fraction;
  opts.fit = to_fit(a.model);
  opts.pi_repeats = a.pi_repeats;
  opts.pi_metric = parse_metric(a.pi_metric);
  opts.shap_instances = a.shap_instances;
  opts.shap_samples = a.shap_samples;
  opts.transfer_repeats = a.repeats;

  const TransferReport r = cross_explain(ld.d, source, a.k, a.common.seed, opts);
  json j = to_json(r);
  j["dataset"] = ld.desc;
  emit(a.common, "cross_explain.json", canonical_dump(j));
  emit(a.common, "cross_explain.md", markdown_transfer(r));
}

struct SweepArgs {
  CommonArgs common;
  DataArgs data;
  ModelArgs model;
  std::string method = "shap";
  std::uint64_t k = 3;
  double test_fraction = 0.15;
  std::uint64_t pi_repeats = 10;
  std::string pi_metric = "mcc";
  std::uint64_t shap_instances = 50;
  std::uint64_t shap_samples = 2048;
  std::vector<std::string> vary;
};

void run_sweep(const SweepArgs& a) {
  const LoadedData ld = load_data(a.data, a.common.seed);
  RunConfig base;
  base.model = model_kind_from_name(a.model.model);
  base.method = parse_method(a.method);
  base.master_seed = a.common.seed;
  base.options.test_fraction = a.test_fraction;
  base.options.fit = to_fit(a.model);
  base.options.pi_repeats = a.pi_repeats;
  base.options.pi_metric = parse_metric(a.pi_metric);
  base.options.shap_instances = a.shap_instances;
  base.options.shap_samples = a.shap_samples;

  std::vector<ConfigDelta> deltas;
  deltas.reserve(a.vary.size());
  for (const std::string& v : a.vary) deltas.push_back(parse_vary(v));

  const ConsistencyReport r = consistency_sweep(ld.d, base, deltas, a.k);
  json j = to_json(r);
  j["dataset"] = ld.desc;
  j["base"] = json{{"model", model_kind_name(base.model)},
                   {"method", importance_method_name(base.method)},
                   {"hyper", base.options.fit.summary(base.model)},
                   {"test_fraction", base.options.test_fraction},
                   {"master_seed", base.master_seed},
                   {"k", a.k}};
  emit(a.common, "sweep.json", canonical_dump(j));
  emit(a.common, "sweep.md", markdown_sweep(r));
}

struct ProbeArgs {
  CommonArgs common;
  double threshold = 0.95;
  std::uint64_t max_small = 20;
  std::vector<std::uint64_t> tn_ladder{10000, 1000000};
};

void run_probe(const ProbeArgs& a) {
  const std::vector<MccCounterexample> hits =
      mcc_guarantee_probe(a.threshold, a.max_small, a.tn_ladder);
  json arr = json::array();
  for (const MccCounterexample& h : hits) {
    arr.push_back(json{{"confusion", to_json(h.cm)},
                       {"metrics", to_json(h.metrics)},
                       {"failing", h.failing}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"threshold", a.threshold},
         {"max_small", a.max_small},
         {"tn_ladder", a.tn_ladder},
         {"count", hits.size()},
         {"counterexamples", arr}};
  emit(a.common, "probe_mcc.json", canonical_dump(j));
  std::cout << hits.size()
            << " matrices where MCC >= threshold but another metric is not\n";
}

struct ToyArgs {
  CommonArgs common;
  double c1 = 0.9;
  double c2 = 0.1;
  double threshold = 7.0;
};

void run_toy(const ToyArgs& a) {
  const ToyAlignmentReport r = toy_alignment_demo(a.c1, a.c2, a.threshold);
  emit(a.common, "toy_demo.json", canonical_dump(to_json(r)));
  emit(a.common, "toy_demo.md", markdown_toy(r));
}

void add_explain_knobs(CLI::App* cmd, std::uint64_t& pi_repeats,
                       std::string& pi_metric, std::uint64_t& shap_instances,
                       std::uint64_t& shap_samples) {
  cmd->add_option("--pi-repeats", pi_repeats, "permutation repeats per feature")
      ->capture_default_str();
  cmd->add_option("--pi-metric", pi_metric,
                  "metric whose drop PI measures (accuracy, balanced_accuracy, "
                  "f1, precision, recall, mcc)")
      ->capture_default_str();
  cmd->add_option("--shap-instances", shap_instances,
                  "rows sampled from the test split for SHAP")
      ->capture_default_str();
  cmd->add_option("--shap-samples", shap_samples,
                  "coalition budget when above the enumeration limit")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"audits of feature-based explanations on tabular binary data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI/TOML file");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "write a seeded synthetic CSV");
  add_common(synth, synth_args.common);
  synth->add_option("--rows", synth_args.spec.n_rows, "row count")
      ->capture_default_str();
  synth->add_option("--informative", synth_args.spec.n_informative,
                    "informative feature count")
      ->capture_default_str();
  synth->add_option("--noise", synth_args.spec.n_noise, "noise feature count")
      ->capture_default_str();
  synth->add_option("--pairs", synth_args.spec.n_correlated_pairs,
                    "planted correlated pair count")
      ->capture_default_str();
  synth->add_option("--separation", synth_args.spec.class_separation,
                    "per-dimension class mean separation")
      ->capture_default_str();
  synth->add_option("--positive-fraction", synth_args.spec.positive_fraction,
                    "fraction of class-1 rows")
      ->capture_default_str();
  synth->add_option("--corr-noise", synth_args.spec.correlation_noise,
                    "twin-column jitter sd")
      ->capture_default_str();
  synth->add_option("--name", synth_args.name, "CSV filename inside --out-dir")
      ->capture_default_str();

  ProfileArgs profile_args;
  auto* profile =
      app.add_subcommand("profile", "imbalance and correlation report");
  add_common(profile, profile_args.common);
  add_data(profile, profile_args.data, /*with_prune=*/false);
  profile->add_option("--threshold", profile_args.threshold,
                      "|r| reported as strongly correlated")
      ->capture_default_str();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "fit and score models on a split");
  add_common(train, train_args.common);
  add_data(train, train_args.data);
  train_args.model.model = "all";
  add_model(train, train_args.model, /*allow_all=*/true);
  train->add_option("--test-fraction", train_args.test_fraction,
                    "held-out fraction")
      ->capture_default_str();

  ExplainArgs explain_args;
  auto* explain =
      app.add_subcommand("explain", "importance vector, table, and bar chart");
  add_common(explain, explain_args.common);
  add_data(explain, explain_args.data);
  add_model(explain, explain_args.model, /*allow_all=*/false);
  explain->add_option("--method", explain_args.method,
                      "dt_fi, ridge_fc, pi, or shap")
      ->capture_default_str();
  explain->add_option("--test-fraction", explain_args.test_fraction,
                      "held-out fraction")
      ->capture_default_str();
  explain->add_flag("--pi-on-train", explain_args.pi_on_train,
                    "compute PI on the training split instead of test");
  add_explain_knobs(explain, explain_args.pi_repeats, explain_args.pi_metric,
                    explain_args.shap_instances, explain_args.shap_samples);

  CrossExplainArgs cross_args;
  auto* cross = app.add_subcommand(
      "cross-explain", "top-k transferability audit via a receiver tree");
  add_common(cross, cross_args.common);
  add_data(cross, cross_args.data);
  cross_args.model.model = "ridge";
  add_model(cross, cross_args.model, /*allow_all=*/false);
  cross->add_option("--method", cross_args.method,
                    "dt_fi, ridge_fc, pi, or shap")
      ->capture_default_str();
  cross->add_option("--k", cross_args.k, "top-k size")->capture_default_str();
  cross->add_option("--test-fraction", cross_args.test_fraction,
                    "held-out fraction")
      ->capture_default_str();
  cross->add_option("--repeats", cross_args.repeats, "receiver repeats")
      ->capture_default_str();
  add_explain_knobs(cross, cross_args.pi_repeats, cross_args.pi_metric,
                    cross_args.shap_instances, cross_args.shap_samples);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand(
      "sweep", "consistency sweep over configuration variations");
  add_common(sweep, sweep_args.common);
  add_data(sweep, sweep_args.data);
  add_model(sweep, sweep_args.model, /*allow_all=*/false);
  sweep->add_option("--method", sweep_args.method, "dt_fi, ridge_fc, pi, or shap")
      ->capture_default_str();
  sweep->add_option("--k", sweep_args.k, "top-k size")->capture_default_str();
  sweep->add_option("--test-fraction", sweep_args.test_fraction,
                    "held-out fraction")
      ->capture_default_str();
  sweep->add_option("--vary", sweep_args.vary,
                    "one run per flag: key=value with key in {seed, split, "
                    "optimizer, batch_size, lr, epochs, alpha, max_depth}");
  add_explain_knobs(sweep, sweep_args.pi_repeats, sweep_args.pi_metric,
                    sweep_args.shap_instances, sweep_args.shap_samples);

  ProbeArgs probe_args;
  auto* probe = app.add_subcommand(
      "probe-mcc", "search for high-MCC/low-other-metric confusion matrices");
  add_common(probe, probe_args.common);
  probe->add_option("--threshold", probe_args.threshold, "metric threshold")
      ->capture_default_str();
  probe->add_option("--max-small", probe_args.max_small,
                    "upper bound for the tp/fn/fp grid")
      ->capture_default_str();
  probe->add_option("--tn", probe_args.tn_ladder,
                    "tn values to probe (repeatable)")
      ->capture_default_str();

  ToyArgs toy_args;
  auto* toy = app.add_subcommand(
      "toy-demo", "two-feature coefficient vs gradient alignment report");
  add_common(toy, toy_args.common);
  toy->add_option("--c1", toy_args.c1, "threshold-feature coefficient")
      ->capture_default_str();
  toy->add_option("--c2", toy_args.c2, "linear-feature coefficient")
      ->capture_default_str();
  toy->add_option("--threshold", toy_args.threshold, "step location on T")
      ->capture_default_str();

  synth->callback([&] { run_synth(synth_args); });
  profile->callback([&] { run_profile(profile_args); });
  train->callback([&] { run_train(train_args); });
  explain->callback([&] { run_explain(explain_args); });
  cross->callback([&] { run_cross_explain(cross_args); });
  sweep->callback([&] { run_sweep(sweep_args); });
  probe->callback([&] { run_probe(probe_args); });
  toy->callback([&] { run_toy(toy_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
