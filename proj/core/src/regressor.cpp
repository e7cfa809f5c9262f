#include "panda/regressor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "panda/error.hpp"
#include "serialization.hpp"

namespace panda {

using detail::json;
using detail::ObjectReader;

void TrainOptions::validate() const {
  if (n_trees < 1) throw InvalidArgument("n_trees must be >= 1");
  if (max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw InvalidArgument("learning_rate must be in (0, 1]");
  }
  if (!(l2_leaf_reg >= 0.0) || !std::isfinite(l2_leaf_reg)) {
    throw InvalidArgument("l2_leaf_reg must be non-negative");
  }
  if (min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be >= 1");
}

double FeatureRow::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw InvalidArgument("feature row has no column '" + std::string(name) + "'");
}

void FeatureTable::add_row(std::span<const double> values) {
  if (values.size() != columns_.size()) {
    throw InvalidArgument("feature row has " + std::to_string(values.size()) +
                          " values, table has " + std::to_string(columns_.size()) + " columns");
  }
  data_.insert(data_.end(), values.begin(), values.end());
}

void FeatureTable::add_row(const FeatureRow& row) {
  if (row.names != columns_) throw InvalidArgument("feature row names do not match table columns");
  add_row(std::span<const double>(row.values));
}

double RegressionTree::evaluate(std::span<const double> features) const {
  int k = 0;
  while (!nodes[k].is_leaf()) {
    const TreeNode& n = nodes[k];
    k = features[n.feature] < n.threshold ? n.left : n.right;
  }
  return nodes[k].weight;
}

int RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (nodes[k].is_leaf()) continue;
    depth[nodes[k].left] = depth[k] + 1;
    depth[nodes[k].right] = depth[k] + 1;
    max_depth = std::max(max_depth, depth[k] + 1);
  }
  return max_depth;
}

BoostedEnsemble::BoostedEnsemble(std::vector<std::string> feature_names, double base_score,
                                 double learning_rate, std::vector<RegressionTree> trees)
    : feature_names_(std::move(feature_names)),
      base_score_(base_score),
      learning_rate_(learning_rate),
      trees_(std::move(trees)) {}

BoostedEnsemble BoostedEnsemble::constant(std::vector<std::string> feature_names, double value) {
  return BoostedEnsemble(std::move(feature_names), value, 1.0, {});
}

double BoostedEnsemble::predict(std::span<const double> features) const {
  if (features.size() != feature_names_.size()) {
    throw ModelError("ensemble expects " + std::to_string(feature_names_.size()) +
                     " features, got " + std::to_string(features.size()));
  }
  double p = base_score_;
  for (const auto& tree : trees_) p += learning_rate_ * tree.evaluate(features);
  return p;
}

double BoostedEnsemble::predict(const FeatureRow& row) const {
  if (row.names == feature_names_) return predict(std::span<const double>(row.values));
  std::unordered_map<std::string_view, double> by_name;
  for (std::size_t i = 0; i < row.names.size(); ++i) by_name.emplace(row.names[i], row.values[i]);
  std::vector<double> ordered;
  ordered.reserve(feature_names_.size());
  for (const auto& name : feature_names_) {
    auto it = by_name.find(name);
    if (it == by_name.end()) throw ModelError("missing feature '" + name + "'");
    ordered.push_back(it->second);
  }
  return predict(std::span<const double>(ordered));
}

namespace {

struct NodeStats {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct ScanState {
  std::size_t count = 0;
  double sum = 0.0;
  double last = 0.0;
  bool has_last = false;
};

class TreeGrower {
 public:
  TreeGrower(const std::vector<std::vector<double>>& columns,
             const std::vector<std::vector<std::size_t>>& sorted, const TrainOptions& opts)
      : columns_(columns), sorted_(sorted), opts_(opts) {}

  // Grows one tree on `residuals`; `leaf_of` receives each row's leaf.
  RegressionTree grow(const std::vector<double>& residuals, std::vector<int>& leaf_of) const {
    const std::size_t n = residuals.size();
    RegressionTree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of(n, 0);
    std::vector<int> active = {0};

    for (int depth = 0; !active.empty(); ++depth) {
      std::vector<char> is_active(tree.nodes.size(), 0);
      for (int k : active) is_active[k] = 1;

      std::vector<NodeStats> stats(tree.nodes.size());
      for (std::size_t i = 0; i < n; ++i) {
        int k = node_of[i];
        if (!is_active[k]) continue;
        stats[k].count += 1;
        stats[k].sum += residuals[i];
        stats[k].sum_sq += residuals[i] * residuals[i];
      }

      std::vector<SplitCandidate> best(tree.nodes.size());
      if (depth < opts_.max_depth) find_splits(residuals, node_of, is_active, stats, best);

      std::vector<int> next;
      std::vector<char> split_here(tree.nodes.size(), 0);
      for (int k : active) {
        const NodeStats& st = stats[k];
        const SplitCandidate& b = best[k];
        const bool worth = b.feature >= 0 && b.gain > 1e-12 * st.sum_sq;
        if (worth) {
          int left = static_cast<int>(tree.nodes.size());
          tree.nodes.emplace_back();
          tree.nodes.emplace_back();
          TreeNode& node = tree.nodes[k];
          node.feature = b.feature;
          node.threshold = b.threshold;
          node.left = left;
          node.right = left + 1;
          split_here[k] = 1;
          next.push_back(left);
          next.push_back(left + 1);
        } else {
          tree.nodes[k].weight = st.sum / (static_cast<double>(st.count) + opts_.l2_leaf_reg);
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        int k = node_of[i];
        if (k < static_cast<int>(split_here.size()) && split_here[k]) {
          const TreeNode& node = tree.nodes[k];
          node_of[i] = columns_[node.feature][i] < node.threshold ? node.left : node.right;
        }
      }
      active = std::move(next);
    }
    leaf_of = std::move(node_of);
    return tree;
  }

 private:
  void find_splits(const std::vector<double>& residuals, const std::vector<int>& node_of,
                   const std::vector<char>& is_active, const std::vector<NodeStats>& stats,
                   std::vector<SplitCandidate>& best) const {
    const std::size_t min_leaf = static_cast<std::size_t>(opts_.min_samples_leaf);
    std::vector<ScanState> scan(stats.size());
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      std::fill(scan.begin(), scan.end(), ScanState{});
      const auto& col = columns_[f];
      for (std::size_t i : sorted_[f]) {
        int k = node_of[i];
        if (!is_active[k]) continue;
        ScanState& s = scan[k];
        const double v = col[i];
        if (s.has_last && v > s.last) {
          const NodeStats& total = stats[k];
          const std::size_t left_n = s.count;
          const std::size_t right_n = total.count - left_n;
          if (left_n >= min_leaf && right_n >= min_leaf) {
            const double left_sum = s.sum;
            const double right_sum = total.sum - left_sum;
            const double gain = left_sum * left_sum / static_cast<double>(left_n) +
                                right_sum * right_sum / static_cast<double>(right_n) -
                                total.sum * total.sum / static_cast<double>(total.count);
            if (gain > best[k].gain) {
              const double mid = 0.5 * (s.last + v);
              if (s.last < mid && mid < v) best[k] = {static_cast<int>(f), mid, gain};
            }
          }
        }
        s.count += 1;
        s.sum += residuals[i];
        s.last = v;
        s.has_last = true;
      }
    }
  }

  const std::vector<std::vector<double>>& columns_;
  const std::vector<std::vector<std::size_t>>& sorted_;
  const TrainOptions& opts_;
};

}  // namespace

BoostedEnsemble fit(const FeatureTable& features, std::span<const double> labels,
                    const TrainOptions& opts) {
  opts.validate();
  const std::size_t n = features.num_rows();
  const std::size_t num_features = features.num_columns();
  if (num_features == 0) throw InvalidArgument("fit needs at least one feature column");
  if (n == 0) throw InvalidArgument("fit needs at least one row");
  if (labels.size() != n) {
    throw InvalidArgument("fit: " + std::to_string(n) + " rows but " +
                          std::to_string(labels.size()) + " labels");
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (double v : features.row(r)) {
      if (!std::isfinite(v)) throw InvalidArgument("fit: non-finite feature value");
    }
    if (!std::isfinite(labels[r])) throw InvalidArgument("fit: non-finite label");
  }

  // Canonical row order makes the model independent of input order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ra = features.row(a);
    auto rb = features.row(b);
    if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())) return true;
    if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end())) return false;
    return labels[a] < labels[b];
  });

  std::vector<std::vector<double>> columns(num_features, std::vector<double>(n));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = features.row(order[i]);
    for (std::size_t f = 0; f < num_features; ++f) columns[f][i] = row[f];
    y[i] = labels[order[i]];
  }
  std::vector<std::vector<std::size_t>> sorted(num_features);
  for (std::size_t f = 0; f < num_features; ++f) {
    auto& idx = sorted[f];
    idx.resize(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return columns[f][a] < columns[f][b]; });
  }

  double base = 0.0;
  for (double v : y) base += v;
  base /= static_cast<double>(n);

  std::vector<double> prediction(n, base);
  std::vector<double> residuals(n);
  std::vector<int> leaf_of;
  std::vector<RegressionTree> trees;
  trees.reserve(static_cast<std::size_t>(opts.n_trees));
  TreeGrower grower(columns, sorted, opts);
  for (int t = 0; t < opts.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) residuals[i] = y[i] - prediction[i];
    RegressionTree tree = grower.grow(residuals, leaf_of);
    for (std::size_t i = 0; i < n; ++i) {
      prediction[i] += opts.learning_rate * tree.nodes[leaf_of[i]].weight;
    }
    trees.push_back(std::move(tree));
  }
  return BoostedEnsemble(features.columns(), base, opts.learning_rate, std::move(trees));
}

namespace detail {

json options_to_json(const TrainOptions& o) {
  return json{{"n_trees", o.n_trees},
              {"max_depth", o.max_depth},
              {"learning_rate", o.learning_rate},
              {"l2_leaf_reg", o.l2_leaf_reg},
              {"min_samples_leaf", o.min_samples_leaf}};
}

TrainOptions options_from_json(const json& j) {
  ObjectReader r(j, "train_options");
  TrainOptions o;
  o.n_trees = r.integer("n_trees");
  o.max_depth = r.integer("max_depth");
  o.learning_rate = r.number("learning_rate");
  o.l2_leaf_reg = r.number("l2_leaf_reg");
  o.min_samples_leaf = r.integer("min_samples_leaf");
  r.finish();
  o.validate();
  return o;
}

json ensemble_to_json(const BoostedEnsemble& m) {
  json trees = json::array();
  for (const auto& tree : m.trees()) {
    json feature = json::array(), threshold = json::array(), left = json::array(),
         right = json::array(), weight = json::array();
    for (const auto& node : tree.nodes) {
      feature.push_back(node.feature);
      threshold.push_back(node.threshold);
      left.push_back(node.left);
      right.push_back(node.right);
      weight.push_back(node.weight);
    }
    trees.push_back(json{{"feature", feature},
                         {"threshold", threshold},
                         {"left", left},
                         {"right", right},
                         {"weight", weight}});
  }
  return json{{"format", std::string(kEnsembleFormat)},
              {"base_score", m.base_score()},
              {"learning_rate", m.learning_rate()},
              {"feature_names", m.feature_names()},
              {"trees", trees}};
}

BoostedEnsemble ensemble_from_json(const json& j) {
  expect_format(j, kEnsembleFormat);
  return guard_payload([&] {
    ObjectReader r(j, "ensemble");
    r.required("format");
    const double base = r.number("base_score");
    const double lr = r.number("learning_rate");
    const json& names_json = r.required("feature_names");
    if (!names_json.is_array()) throw ParseError("ensemble.feature_names: expected an array");
    std::vector<std::string> names;
    for (const auto& n : names_json) names.push_back(ObjectReader::as_string(n, "feature name"));
    const json& trees_json = r.required("trees");
    if (!trees_json.is_array()) throw ParseError("ensemble.trees: expected an array");
    r.finish();

    std::vector<RegressionTree> trees;
    for (const auto& t : trees_json) {
      ObjectReader tr(t, "tree");
      const json& feature = tr.required("feature");
      const json& threshold = tr.required("threshold");
      const json& left = tr.required("left");
      const json& right = tr.required("right");
      const json& weight = tr.required("weight");
      tr.finish();
      const std::size_t size = feature.size();
      if (!feature.is_array() || size == 0 || threshold.size() != size || left.size() != size ||
          right.size() != size || weight.size() != size) {
        throw ParseError("tree arrays are inconsistent");
      }
      RegressionTree tree;
      tree.nodes.resize(size);
      for (std::size_t k = 0; k < size; ++k) {
        TreeNode& node = tree.nodes[k];
        node.feature = ObjectReader::as_int(feature[k], "tree.feature");
        node.threshold = ObjectReader::as_number(threshold[k], "tree.threshold");
        node.left = ObjectReader::as_int(left[k], "tree.left");
        node.right = ObjectReader::as_int(right[k], "tree.right");
        node.weight = ObjectReader::as_number(weight[k], "tree.weight");
        if (node.feature >= 0) {
          const int limit = static_cast<int>(size);
          if (node.feature >= static_cast<int>(names.size()) || node.left <= static_cast<int>(k) ||
              node.right <= static_cast<int>(k) || node.left >= limit || node.right >= limit) {
            throw ParseError("tree node " + std::to_string(k) + " is malformed");
          }
        }
      }
      trees.push_back(std::move(tree));
    }
    return BoostedEnsemble(std::move(names), base, lr, std::move(trees));
  });
}

}  // namespace detail

std::string serialize(const BoostedEnsemble& model) { return detail::ensemble_to_json(model).dump(); }

BoostedEnsemble deserialize_ensemble(std::string_view bytes) {
  return detail::ensemble_from_json(detail::parse_model_payload(bytes));
}

std::string peek_model_format(std::string_view bytes) {
  const json doc = detail::parse_model_payload(bytes);
  auto it = doc.is_object() ? doc.find("format") : doc.end();
  if (it == doc.end() || !it->is_string()) {
    throw CorruptPayloadError("corrupt model payload: missing format tag");
  }
  return it->get<std::string>();
}

}  // namespace panda
