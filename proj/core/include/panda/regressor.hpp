#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace panda {

// Hyper-parameters of the boosted-tree regressor. Defaults: 100 trees of
// depth <= 6, shrinkage 0.3, L2 leaf regularizer 1.0.
struct TrainOptions {
  int n_trees = 100;
  int max_depth = 6;
  double learning_rate = 0.3;
  double l2_leaf_reg = 1.0;
  int min_samples_leaf = 1;

  // Throws InvalidArgument when a field is out of bounds.
  void validate() const;

  bool operator==(const TrainOptions&) const = default;
};

// A named feature vector; `imputed` lists features that were absent from
// the source data and set to 0.
struct FeatureRow {
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<std::string> imputed;

  // Throws InvalidArgument if `name` is absent.
  double at(std::string_view name) const;
};

// Row-major matrix with named columns.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_rows() const { return columns_.empty() ? 0 : data_.size() / columns_.size(); }

  // Throws InvalidArgument on a length mismatch.
  void add_row(std::span<const double> values);
  // Names must match the table's columns.
  void add_row(const FeatureRow& row);

  double operator()(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * columns_.size(), columns_.size()};
  }

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

// Flat binary tree. Leaves have feature == -1. A row goes left when
// value < threshold.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(std::span<const double> features) const;
  int depth() const;
  bool operator==(const RegressionTree&) const = default;
};

// base_score + learning_rate * (sum of leaf weights), accumulated tree by
// tree in training order.
class BoostedEnsemble {
 public:
  BoostedEnsemble() = default;
  BoostedEnsemble(std::vector<std::string> feature_names, double base_score, double learning_rate,
                  std::vector<RegressionTree> trees);

  // A tree-less ensemble that always predicts `value`.
  static BoostedEnsemble constant(std::vector<std::string> feature_names, double value);

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  double base_score() const { return base_score_; }
  double learning_rate() const { return learning_rate_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

  // Features in feature_names() order.
  double predict(std::span<const double> features) const;
  // Matches by name; throws ModelError when a feature is missing.
  double predict(const FeatureRow& row) const;

  bool operator==(const BoostedEnsemble&) const = default;

 private:
  std::vector<std::string> feature_names_;
  double base_score_ = 0.0;
  double learning_rate_ = 1.0;
  std::vector<RegressionTree> trees_;
};

// Squared-error gradient boosting with exact greedy splits.
//
// Rows are first put into a canonical order (lexicographic on features, then
// label) so the result does not depend on input row order. Each tree is grown
// level by level: every candidate threshold is the midpoint of two
// consecutive distinct values of a feature inside the node, the split with
// the largest reduction in residual sum of squares wins, ties go to the
// lowest feature index and then the lowest threshold. Leaf weight is
// sum(residuals) / (count + l2_leaf_reg).
//
// Throws InvalidArgument on dimension mismatch, empty input, or non-finite
// values.
BoostedEnsemble fit(const FeatureTable& features, std::span<const double> labels,
                    const TrainOptions& opts);

inline constexpr std::string_view kEnsembleFormat = "panda-gbt-1";

std::string serialize(const BoostedEnsemble& model);
// Throws VersionMismatchError or CorruptPayloadError.
BoostedEnsemble deserialize_ensemble(std::string_view bytes);

// The "format" tag of any serialized model. Throws CorruptPayloadError.
std::string peek_model_format(std::string_view bytes);

}  // namespace panda
