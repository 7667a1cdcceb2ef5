#include "xaudit/tree.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace xaudit {

namespace {

struct PendingNode {
  int index;
  int depth;
  std::vector<std::size_t> rows;
};

}  // namespace

int DecisionTree::leaf_for(const double* row) const {
  int i = 0;
  while (!nodes[static_cast<std::size_t>(i)].is_leaf()) {
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    i = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return i;
}

int DecisionTree::predict_row(const double* row) const {
  const TreeNode& leaf = nodes[static_cast<std::size_t>(leaf_for(row))];
  return leaf.class_counts[1] > leaf.class_counts[0] ? 1 : 0;
}

double DecisionTree::proba_row(const double* row) const {
  const TreeNode& leaf = nodes[static_cast<std::size_t>(leaf_for(row))];
  return static_cast<double>(leaf.class_counts[1]) /
         static_cast<double>(leaf.samples);
}

std::vector<int> DecisionTree::predict(const Matrix& x) const {
  std::vector<int> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = predict_row(x.row_ptr(r));
  return out;
}

std::vector<double> DecisionTree::predict_proba(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) out[r] = proba_row(x.row_ptr(r));
  return out;
}

std::size_t DecisionTree::n_leaves() const {
  std::size_t n = 0;
  for (const TreeNode& node : nodes) n += node.is_leaf() ? 1 : 0;
  return n;
}

int DecisionTree::depth() const {
  // Iterative depth over the explicit node vector (trees can be deep).
  std::vector<std::pair<int, int>> stack{{0, 0}};
  int best = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const TreeNode& n = nodes[static_cast<std::size_t>(i)];
    if (!n.is_leaf()) {
      stack.push_back({n.left, d + 1});
      stack.push_back({n.right, d + 1});
    }
  }
  return best;
}

DecisionTree train_dt(const Dataset& train, const DtParams& params) {
  if (train.n_rows() == 0) {
    throw std::invalid_argument("train_dt: empty dataset");
  }
  if (params.min_samples_split < 2) {
    throw std::invalid_argument("train_dt: min_samples_split must be >= 2");
  }
  if (params.max_depth && *params.max_depth < 0) {
    throw std::invalid_argument("train_dt: max_depth must be >= 0");
  }

  DecisionTree t;
  t.n_features = train.n_features();
  t.n_training_rows = train.n_rows();
  t.params = params;

  std::vector<std::size_t> all(train.n_rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

  // Explicit stack, right child pushed first, so nodes land in preorder and
  // the layout is identical run to run.
  std::vector<PendingNode> stack;
  t.nodes.emplace_back();
  stack.push_back({0, 0, std::move(all)});

  while (!stack.empty()) {
    PendingNode item = std::move(stack.back());
    stack.pop_back();
    TreeNode& node = t.nodes[static_cast<std::size_t>(item.index)];

    std::uint64_t c1 = 0;
    for (std::size_t r : item.rows) c1 += static_cast<std::uint64_t>(train.y[r]);
    const std::uint64_t c0 = item.rows.size() - c1;
    node.samples = item.rows.size();
    node.class_counts = {c0, c1};
    node.impurity = node_impurity(c0, c1, params.criterion);

    const bool pure = c0 == 0 || c1 == 0;
    const bool too_small = item.rows.size() < params.min_samples_split;
    const bool at_depth = params.max_depth && item.depth >= *params.max_depth;
    if (pure || too_small || at_depth) continue;  // stays a leaf

    const SplitCandidate best =
        best_split_scan(train.x, train.y, item.rows, params.criterion);
    if (best.feature < 0) continue;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : item.rows) {
      if (train.x(r, static_cast<std::size_t>(best.feature)) <= best.threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    assert(!left_rows.empty() && !right_rows.empty());

    const int left_index = static_cast<int>(t.nodes.size());
    const int right_index = left_index + 1;
    // Note: emplace_back may reallocate; re-take the reference afterwards.
    t.nodes.emplace_back();
    t.nodes.emplace_back();
    TreeNode& parent = t.nodes[static_cast<std::size_t>(item.index)];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = left_index;
    parent.right = right_index;
    stack.push_back({right_index, item.depth + 1, std::move(right_rows)});
    stack.push_back({left_index, item.depth + 1, std::move(left_rows)});
  }
  return t;
}

std::vector<double> dt_impurity_importances(const DecisionTree& t) {
  std::vector<double> imp(t.n_features, 0.0);
  const double n_total = static_cast<double>(t.n_training_rows);
  double sum = 0.0;
  for (const TreeNode& node : t.nodes) {
    if (node.is_leaf()) continue;
    const TreeNode& l = t.nodes[static_cast<std::size_t>(node.left)];
    const TreeNode& r = t.nodes[static_cast<std::size_t>(node.right)];
    const double wl = static_cast<double>(l.samples) /
                      static_cast<double>(node.samples);
    const double wr = static_cast<double>(r.samples) /
                      static_cast<double>(node.samples);
    const double gain =
        node.impurity - (wl * l.impurity + wr * r.impurity);
    const double weighted =
        (static_cast<double>(node.samples) / n_total) * gain;
    imp[static_cast<std::size_t>(node.feature)] += weighted;
    sum += weighted;
  }
  if (sum > 0.0) {
    for (double& v : imp) v /= sum;
  }
  return imp;
}

std::vector<Rule> dt_extract_rules(const DecisionTree& t) {
  std::vector<Rule> rules;
  struct Frame {
    int index;
    std::vector<RuleClause> clauses;
  };
  std::vector<Frame> stack{{0, {}}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const TreeNode& n = t.nodes[static_cast<std::size_t>(f.index)];
    if (n.is_leaf()) {
      Rule r;
      r.clauses = std::move(f.clauses);
      r.label = n.class_counts[1] > n.class_counts[0] ? 1 : 0;
      r.support = n.samples;
      r.class_counts = n.class_counts;
      rules.push_back(std::move(r));
      continue;
    }
    Frame right{n.right, f.clauses};
    right.clauses.push_back({n.feature, true, n.threshold});
    Frame left{n.left, std::move(f.clauses)};
    left.clauses.push_back({n.feature, false, n.threshold});
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }
  return rules;
}

bool rule_matches(const Rule& r, const double* row) {
  for (const RuleClause& c : r.clauses) {
    const double v = row[c.feature];
    if (c.greater ? !(v > c.threshold) : !(v <= c.threshold)) return false;
  }
  return true;
}

int rules_predict_row(const std::vector<Rule>& rules, const double* row) {
  const Rule* hit = nullptr;
  for (const Rule& r : rules) {
    if (rule_matches(r, row)) {
      assert(hit == nullptr && "rule set must be mutually exclusive");
      hit = &r;
#ifdef NDEBUG
      break;
#endif
    }
  }
  if (hit == nullptr) {
    throw std::logic_error("rules_predict_row: no rule matched");
  }
  return hit->label;
}

}  // namespace xaudit
