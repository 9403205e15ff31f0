#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "predatw/features.hpp"
#include "predatw/trace.hpp"

namespace predatw {

using FeatureRow = std::array<double, kNumFeatures>;

/// Design matrix + targets in canonical feature order.
struct LabeledSet {
  std::vector<FeatureRow> x;
  std::vector<double> y;

  std::size_t size() const noexcept { return y.size(); }
};

LabeledSet to_labeled(const TraceDataset& d);

struct TreeParams {
  int max_depth = 8;
  std::size_t min_samples_leaf = 5;
  std::size_t min_samples_split = 10;
  /// Features the splitter may use; clearing one is the ablation switch.
  std::array<bool, kNumFeatures> use_feature = {true, true, true, true, true, true, true, true};

  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean training target of the samples reaching this node
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

/// Regression tree, nodes stored in pre-order (root at 0, left subtree
/// before right). Routing: x[feature] <= threshold goes left.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, TreeParams params);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeParams& params() const noexcept { return params_; }

  double predict(const FeatureRow& x) const;
  double predict(const FeatureVector& x) const { return predict(x.as_array()); }

  /// Number of internal nodes visited when routing x.
  int path_length(const FeatureRow& x) const;
  /// Longest root-to-leaf edge count.
  int depth() const;
  std::size_t leaf_count() const;

  bool operator==(const DecisionTree&) const = default;

 private:
  std::vector<TreeNode> nodes_;
  TreeParams params_;
};

struct LinearModel {
  std::array<double, kNumFeatures> weights{};
  double intercept = 0.0;

  double predict(const FeatureRow& x) const;
  double predict(const FeatureVector& x) const { return predict(x.as_array()); }
  bool operator==(const LinearModel&) const = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;

  double predict(const FeatureRow& x) const;
  double predict(const FeatureVector& x) const { return predict(x.as_array()); }
  bool operator==(const ForestModel&) const = default;
};

struct BoostStage {
  DecisionTree tree;
  double learning_rate = 0.1;
  bool operator==(const BoostStage&) const = default;
};

struct BoostedModel {
  double base = 0.0;
  std::vector<BoostStage> stages;

  double predict(const FeatureRow& x) const;
  double predict(const FeatureVector& x) const { return predict(x.as_array()); }
  bool operator==(const BoostedModel&) const = default;
};

using RegressionModel = std::variant<DecisionTree, LinearModel, ForestModel, BoostedModel>;

double predict(const RegressionModel& model, const FeatureRow& x);
double predict(const RegressionModel& model, const FeatureVector& x);
std::string model_kind(const RegressionModel& model);  // "tree", "linear", "forest", "boosted"

// --- training -------------------------------------------------------------

/// Greedy CART with a sum-of-squared-error criterion. Candidate thresholds are
/// midpoints between consecutive distinct sorted values of each feature; ties
/// go to the lower feature index, then the lower threshold. Splitting stops at
/// max_depth, below min_samples_split, on a constant target, or when no split
/// leaves min_samples_leaf samples on both sides.
/// Throws std::invalid_argument on an empty training set.
DecisionTree fit_tree(const LabeledSet& train, const TreeParams& params = {});

/// Least squares with intercept; rank deficiency is resolved by the
/// minimum-norm solution. Needs at least 9 samples.
LinearModel fit_linear(const LabeledSet& train);

struct ForestParams {
  std::size_t k = 100;
  bool bootstrap = false;  // false: disjoint k-way partition; true: classical bagging
  TreeParams tree;
};

/// Shuffles with `seed`, then either partitions into k near-equal disjoint
/// parts or draws k bootstrap resamples, and fits one tree per part.
/// Throws std::invalid_argument if k == 0 or k > n / min_samples_split.
ForestModel fit_forest(const LabeledSet& train, const ForestParams& params, std::uint64_t seed);

struct BoostParams {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  TreeParams tree;
};

/// Stage t fits a tree to y − (current prediction). Throws on rounds == 0 or lr outside (0, 1].
BoostedModel fit_boosted(const LabeledSet& train, const BoostParams& params);

// --- evaluation -----------------------------------------------------------

struct EvalReport {
  double mae_ms = 0.0;
  std::size_t n = 0;
  std::vector<std::pair<double, double>> per_sample;  // (actual, predicted)
};

/// MAE = Σ|Y_i − Ŷ_i| / N. Throws std::invalid_argument on an empty test set.
EvalReport evaluate_mae(const RegressionModel& model, const LabeledSet& test);

/// Random disjoint split; each part keeps the original frame order.
/// Test size is round(n * test_fraction) clamped to [1, n-1].
std::pair<TraceDataset, TraceDataset> split_dataset(const TraceDataset& d, double test_fraction, std::uint64_t seed);

using PathCounts = std::array<std::uint32_t, kNumFeatures>;

/// counts[i][f] = internal nodes on sample i's routing path that test feature f.
std::vector<PathCounts> decision_path_counts(const DecisionTree& tree, const std::vector<FeatureRow>& samples);

// --- serialization --------------------------------------------------------

/// Line-oriented text format, see docs in README ("Model file format").
void write_model(const RegressionModel& model, std::ostream& out);
RegressionModel read_model(std::istream& in);
void save_model(const RegressionModel& model, const std::filesystem::path& path);
RegressionModel load_model(const std::filesystem::path& path);

}  // namespace predatw
