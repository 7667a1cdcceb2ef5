// CART-style binary decision tree grown on raw (unstandardized) features,
// with impurity-decrease importances and flat rule extraction.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "xaudit/dataset.hpp"
#include "xaudit/kernels.hpp"

namespace xaudit {

struct DtParams {
  SplitCriterion criterion = SplitCriterion::kGini;
  std::optional<int> max_depth;  // unlimited when unset
  std::size_t min_samples_split = 2;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double impurity = 0.0;
  std::size_t samples = 0;
  std::array<std::uint64_t, 2> class_counts{0, 0};
  int left = -1;
  int right = -1;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // preorder; root at 0
  std::size_t n_features = 0;
  std::size_t n_training_rows = 0;
  DtParams params;

  int leaf_for(const double* row) const;
  int predict_row(const double* row) const;   // leaf majority, tie -> 0
  double proba_row(const double* row) const;  // leaf class-1 frequency
  std::vector<int> predict(const Matrix& x) const;
  std::vector<double> predict_proba(const Matrix& x) const;
  std::size_t n_leaves() const;
  int depth() const;
};

/// Grows the tree: split while impurity strictly decreases, node size and
/// depth permit. Candidate thresholds are midpoints between consecutive
/// distinct values; gain ties resolve to the lowest feature index, then the
/// lowest threshold, so training is order-deterministic. A single-class
/// dataset yields a single leaf; an empty one throws std::invalid_argument.
DecisionTree train_dt(const Dataset& train, const DtParams& params = {});

/// Impurity-decrease importance per feature: sum over internal nodes of
/// (node weight * gain), normalized to sum 1 when any split exists,
/// all-zero otherwise.
std::vector<double> dt_impurity_importances(const DecisionTree& t);

// --- Rule extraction ---------------------------------------------------------

struct RuleClause {
  int feature = 0;
  bool greater = false;  // false: x[feature] <= threshold; true: >
  double threshold = 0.0;
};

struct Rule {
  std::vector<RuleClause> clauses;  // conjunction, root-to-leaf order
  int label = 0;
  std::size_t support = 0;  // training rows at the leaf
  std::array<std::uint64_t, 2> class_counts{0, 0};
};

/// One rule per leaf; the set is mutually exclusive and exhaustive by
/// construction, so exactly one rule matches any input row.
std::vector<Rule> dt_extract_rules(const DecisionTree& t);

bool rule_matches(const Rule& r, const double* row);

/// Label of the unique matching rule (asserts the invariant in debug builds).
int rules_predict_row(const std::vector<Rule>& rules, const double* row);

}  // namespace xaudit
