#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "xaudit/audit.hpp"
#include "xaudit/common.hpp"
#include "xaudit/dataset.hpp"
#include "xaudit/explain.hpp"
#include "xaudit/metrics.hpp"
#include "xaudit/report.hpp"

using namespace xaudit;
using nlohmann::json;

namespace {

std::size_t count_occurrences(const std::string& haystack,
                              const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::vector<std::string> object_keys(const json& j) {
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  return keys;
}

ImportanceVector sample_importance(std::size_t n_features) {
  ImportanceVector v;
  v.method = ImportanceMethod::kPermutation;
  for (std::size_t i = 0; i < n_features; ++i) {
    v.feature_names.push_back("f" + std::to_string(i));
    // Alternating signs, magnitudes descending from n_features.
    const double mag = static_cast<double>(n_features - i);
    v.scores.push_back(i % 2 ? -mag : mag);
  }
  v.seed = 7;
  v.repeats = 10;
  return v;
}

}  // namespace

TEST_CASE("canonical_dump sorts keys, indents by two, ends with newline") {
  const json j{{"zeta", 1}, {"alpha", 2}};
  CHECK(canonical_dump(j) == "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n");
}

TEST_CASE("canonical_dump is a fixed point under parse/re-dump") {
  json j;
  j["x"] = 0.1;
  j["tiny"] = 1e-300;
  j["neg"] = -12345678901234.5;
  j["nested"] = json{{"b", json::array({1, 2, 3})}, {"a", "text"}};
  const std::string once = canonical_dump(j);
  const std::string twice = canonical_dump(json::parse(once));
  CHECK(once == twice);
  CHECK(once.back() == '\n');
}

TEST_CASE("confusion matrix serializes all four cells") {
  const ConfusionMatrix cm{504, 131, 27, 100508};
  const json j = to_json(cm);
  CHECK(object_keys(j) == std::vector<std::string>{"fn", "fp", "tn", "tp"});
  CHECK(j["tp"] == 504);
  CHECK(j["fn"] == 131);
  CHECK(j["fp"] == 27);
  CHECK(j["tn"] == 100508);
}

TEST_CASE("metric set serializes values plus the undefined-name list") {
  const MetricSet s = score(ConfusionMatrix{504, 131, 27, 100508});
  const json j = to_json(s);
  CHECK(j.size() == 7);
  CHECK(j["accuracy"].get<double>() == s.accuracy);
  CHECK(j["balanced_accuracy"].get<double>() == s.balanced_accuracy);
  CHECK(j["f1"].get<double>() == s.f1);
  CHECK(j["precision"].get<double>() == s.precision);
  CHECK(j["recall"].get<double>() == s.recall);
  CHECK(j["mcc"].get<double>() == s.mcc);
  CHECK(j["undefined"].is_array());
  CHECK(j["undefined"].empty());
}

TEST_CASE("undefined metrics are listed by name") {
  // All-negative truth: recall, balanced accuracy, and MCC degenerate;
  // precision (0 / 3) and F1 (0 / (0 + 3 + 0)) stay defined.
  const MetricSet s = score(ConfusionMatrix{0, 0, 3, 7});
  const json j = to_json(s);
  const std::vector<std::string> want{"balanced_accuracy", "mcc", "recall"};
  CHECK(j["undefined"].get<std::vector<std::string>>() == want);
}

TEST_CASE("imbalance profile serializes the degree as its band name") {
  ImbalanceProfile p;
  p.total = 4;
  p.positives = 1;
  p.majority_fraction = 0.75;
  p.degree = ImbalanceDegree::kModerate;
  const json j = to_json(p);
  CHECK(j["total"] == 4);
  CHECK(j["positives"] == 1);
  CHECK(j["majority_fraction"] == 0.75);
  CHECK(j["degree"] == "Moderate");
}

TEST_CASE("importance vector serializes method name and provenance") {
  ImportanceVector v = sample_importance(3);
  v.samples = 50;
  const json j = to_json(v);
  CHECK(j["method"] == "PI");
  CHECK(j["feature_names"].get<std::vector<std::string>>() ==
        std::vector<std::string>{"f0", "f1", "f2"});
  CHECK(j["scores"].size() == 3);
  CHECK(j["scores"][0] == 3.0);
  CHECK(j["scores"][1] == -2.0);
  CHECK(j["seed"] == 7);
  CHECK(j["repeats"] == 10);
  CHECK(j["samples"] == 50);
  CHECK(j["degenerate"] == false);
}

TEST_CASE("shap matrix serializes values row by row") {
  ShapMatrix s;
  s.feature_names = {"a", "b"};
  s.values = testutil::make_matrix(2, 2, {1.5, -0.5, 0.25, 0.0});
  s.base_value = 0.125;
  s.seed = 11;
  s.n_coalitions = 4;
  s.exhaustive = true;
  const json j = to_json(s);
  CHECK(j["values"].size() == 2);
  CHECK(j["values"][0] == json::array({1.5, -0.5}));
  CHECK(j["values"][1] == json::array({0.25, 0.0}));
  CHECK(j["base_value"] == 0.125);
  CHECK(j["n_coalitions"] == 4);
  CHECK(j["exhaustive"] == true);
}

TEST_CASE("top-k set serializes selection and provenance") {
  TopKSet t;
  t.k = 2;
  t.features = {"b", "a"};
  t.indices = {1, 0};
  t.clamped = false;
  t.source_model = "ridge";
  t.source_method = "RIDGE_FC";
  t.source_hyper = "alpha=1";
  t.seed = 21;
  const json j = to_json(t);
  CHECK(j["k"] == 2);
  CHECK(j["features"] == json::array({"b", "a"}));
  CHECK(j["indices"] == json::array({1, 0}));
  CHECK(j["clamped"] == false);
  CHECK(j["source_model"] == "ridge");
  CHECK(j["source_method"] == "RIDGE_FC");
  CHECK(j["source_hyper"] == "alpha=1");
  CHECK(j["seed"] == 21);
}

TEST_CASE("transfer report serializes with schema version") {
  TransferReport r;
  r.source.k = 2;
  r.source.features = {"a", "b"};
  r.source.indices = {0, 1};
  r.features = {"a", "b"};
  r.repeats = 3;
  r.mean = score(ConfusionMatrix{10, 1, 1, 10});
  r.variance = MetricSet{};
  r.run_mcc = {0.9, 0.95, 1.0};
  r.transferable = true;
  const json j = to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["source"]["features"] == json::array({"a", "b"}));
  CHECK(j["repeats"] == 3);
  CHECK(j["run_mcc"] == json::array({0.9, 0.95, 1.0}));
  CHECK(j["threshold"] == 0.95);
  CHECK(j["transferable"] == true);
  CHECK(j.contains("mean"));
  CHECK(j.contains("variance"));
}

TEST_CASE("consistency report embeds runs, jaccard matrix, and summary") {
  ConsistencyReport r;
  SweepRun a;
  a.delta = "base";
  a.seed = 100;
  a.top.features = {"x", "y"};
  a.metrics = score(ConfusionMatrix{9, 1, 1, 9});
  SweepRun b = a;
  b.delta = "seed=42";
  b.seed = 42;
  r.runs = {a, b};
  r.pairwise_jaccard = testutil::make_matrix(2, 2, {1.0, 0.5, 0.5, 1.0});
  r.mean_jaccard = 0.5;
  r.max_delta.accuracy = 0.004;
  r.max_delta.f1 = 0.002;
  r.max_delta.precision = 0.001;
  r.max_delta.recall = 0.003;
  r.max_delta.mcc = 0.04;

  const json j = to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["runs"].size() == 2);
  CHECK(j["runs"][0]["delta"] == "base");
  CHECK(j["runs"][1]["delta"] == "seed=42");
  CHECK(j["runs"][1]["seed"] == 42);
  CHECK(j["runs"][0].contains("top_k"));
  CHECK(j["runs"][0].contains("metrics"));
  CHECK(j["pairwise_jaccard"] == json::array({json::array({1.0, 0.5}),
                                              json::array({0.5, 1.0})}));
  CHECK(j["mean_jaccard"] == 0.5);
  CHECK(j["summary"] == to_json(performance_delta_summary(r)));
  CHECK(j["summary"]["standard_metrics_max_delta"] == 0.004);
  CHECK(j["summary"]["mcc_max_delta"] == 0.04);
  CHECK(j["summary"]["explanation_mean_jaccard"] == 0.5);
}

TEST_CASE("delta summary serializes its three headline numbers") {
  DeltaSummary s;
  s.standard_metrics_max_delta = 0.005;
  s.mcc_max_delta = 0.05;
  s.explanation_mean_jaccard = 0.75;
  const json j = to_json(s);
  CHECK(j.size() == 3);
  CHECK(j["standard_metrics_max_delta"] == 0.005);
  CHECK(j["mcc_max_delta"] == 0.05);
  CHECK(j["explanation_mean_jaccard"] == 0.75);
}

TEST_CASE("toy alignment report serializes both variants") {
  ToyAlignmentReport r;
  r.c1 = 0.9;
  r.c2 = 0.1;
  r.threshold = 7.0;
  r.step.coefficient_top = "T";
  r.step.gradient_top = "H";
  r.step.grad_mean_abs_t = 0.0;
  r.step.grad_mean_abs_h = 0.1;
  r.smooth.coefficient_top = "T";
  r.smooth.gradient_top = "T";
  r.smooth.grad_mean_abs_t = 0.2;
  r.smooth.grad_mean_abs_h = 0.1;
  const json j = to_json(r);
  CHECK(j["schema_version"] == 1);
  CHECK(j["c1"] == 0.9);
  CHECK(j["c2"] == 0.1);
  CHECK(j["threshold"] == 7.0);
  CHECK(j["step"]["coefficient_top"] == "T");
  CHECK(j["step"]["gradient_top"] == "H");
  CHECK(j["step"]["grad_mean_abs_h"] == 0.1);
  CHECK(j["smooth"]["gradient_top"] == "T");
}

TEST_CASE("metric table lays out one column per model") {
  const MetricSet train = score(ConfusionMatrix{90, 10, 5, 95});
  const MetricSet test = score(ConfusionMatrix{80, 20, 10, 90});
  const std::string md =
      markdown_metric_table({{"train", train}, {"test", test}});
  std::istringstream lines(md);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 8);  // header + separator + six metrics
  CHECK(rows[0] == "| metric | train | test |");
  CHECK(rows[1] == "|---|---|---|");
  CHECK(rows[2].find("| accuracy |") == 0);
  CHECK(rows[7].find("| MCC |") == 0);
  CHECK(md.find("0.925") != std::string::npos);  // train accuracy, %.6g
}

TEST_CASE("importance table ranks by |score| and caps the row count") {
  const ImportanceVector v = sample_importance(20);
  const std::string md = markdown_importance_table(v);
  std::istringstream lines(md);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 17);  // header + separator + 15 capped rows
  CHECK(rows[0] == "| rank | feature | score (PI) |");
  CHECK(rows[2] == "| 1 | f0 | 20 |");
  CHECK(rows[3] == "| 2 | f1 | -19 |");  // magnitude rank ignores the sign
  // Explicit cap overrides the default.
  const std::string short_md = markdown_importance_table(v, 2);
  CHECK(count_occurrences(short_md, "\n") == 4);
}

TEST_CASE("transfer markdown states the verdict in both directions") {
  TransferReport r;
  r.source.k = 2;
  r.source.source_model = "ridge";
  r.source.source_method = "RIDGE_FC";
  r.source.source_hyper = "alpha=1";
  r.features = {"a", "b"};
  r.repeats = 4;
  r.mean = score(ConfusionMatrix{99, 1, 1, 99});
  r.variance = MetricSet{};
  r.transferable = true;
  std::string md = markdown_transfer(r);
  CHECK(md.find("ridge + RIDGE_FC") != std::string::npos);
  CHECK(md.find("Top-2 features: a b") != std::string::npos);
  CHECK(md.find("**transferable**") != std::string::npos);

  r.transferable = false;
  md = markdown_transfer(r);
  CHECK(md.find("**not transferable**") != std::string::npos);
}

TEST_CASE("sweep markdown prints one row per run plus the delta summary") {
  ConsistencyReport r;
  for (int i = 0; i < 3; ++i) {
    SweepRun run;
    run.delta = i ? "seed=" + std::to_string(i) : "base";
    run.seed = static_cast<std::uint64_t>(i);
    run.top.features = {"x", "y"};
    run.metrics = score(ConfusionMatrix{9, 1, 1, 9});
    r.runs.push_back(run);
  }
  r.pairwise_jaccard = Matrix(3, 3, 1.0);
  r.mean_jaccard = 1.0;
  const std::string md = markdown_sweep(r);
  CHECK(count_occurrences(md, "| base |") == 1);
  CHECK(count_occurrences(md, "| seed=1 |") == 1);
  CHECK(count_occurrences(md, "| seed=2 |") == 1);
  CHECK(md.find("x y") != std::string::npos);
  CHECK(md.find("Mean pairwise Jaccard of top-k sets: 1") != std::string::npos);
}

TEST_CASE("toy markdown shows one row per variant") {
  ToyAlignmentReport r;
  r.c1 = 0.9;
  r.c2 = 0.1;
  r.threshold = 7.0;
  r.step = {"T", "H", 0.0, 0.1};
  r.smooth = {"T", "T", 0.2, 0.1};
  const std::string md = markdown_toy(r);
  CHECK(md.find("| step | T | H | 0 | 0.1 |") != std::string::npos);
  CHECK(md.find("| smooth | T | T | 0.2 | 0.1 |") != std::string::npos);
}

TEST_CASE("importance svg draws capped, scaled, color-coded bars") {
  const ImportanceVector v = sample_importance(20);
  const std::string svg = svg_importance(v);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>\n") == svg.size() - 7);
  CHECK(count_occurrences(svg, "<rect x=") == 15);
  CHECK(svg.find("Top features by |PI|") != std::string::npos);
  CHECK(svg.find("width=\"360.00\"") != std::string::npos);  // top bar spans
  CHECK(svg.find("#4878d0") != std::string::npos);           // positive bars
  CHECK(svg.find("#d65f5f") != std::string::npos);           // negative bars

  const std::string few = svg_importance(sample_importance(3));
  CHECK(count_occurrences(few, "<rect x=") == 3);
}

TEST_CASE("svg of an all-zero vector degrades to empty bars, never NaN") {
  ImportanceVector v;
  v.method = ImportanceMethod::kDtImpurity;
  v.feature_names = {"a", "b"};
  v.scores = {0.0, 0.0};
  v.degenerate = true;
  const std::string svg = svg_importance(v);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
  CHECK(count_occurrences(svg, "width=\"0.00\"") == 2);
}

TEST_CASE("write_text_file stores bytes verbatim") {
  const std::string path = "xaudit_report_roundtrip.tmp";
  const std::string content = "line one\nline two\r\nodd \x01 byte\n";
  write_text_file(path, content);
  std::ifstream in(path, std::ios::binary);
  std::string back((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(back == content);
  std::remove(path.c_str());
}

TEST_CASE("write_text_file reports an unwritable path") {
  CHECK_THROWS_AS(
      write_text_file("no_such_dir_xaudit/out.txt", "x"),
      DataError);
}
