#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "predatw/predictors.hpp"

namespace predatw {

void TreeParams::validate() const {
  if (max_depth < 0) throw std::invalid_argument("TreeParams: max_depth must be >= 0");
  if (min_samples_leaf < 1) throw std::invalid_argument("TreeParams: min_samples_leaf must be >= 1");
  if (min_samples_split < 2) throw std::invalid_argument("TreeParams: min_samples_split must be >= 2");
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, TreeParams params)
    : nodes_(std::move(nodes)), params_(params) {
  if (nodes_.empty()) throw std::invalid_argument("DecisionTree: no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (n.is_leaf()) continue;
    const auto size = static_cast<int>(nodes_.size());
    if (n.feature >= static_cast<int>(kNumFeatures) || n.left <= static_cast<int>(i) || n.right <= n.left ||
        n.right >= size)
      throw std::invalid_argument("DecisionTree: malformed node " + std::to_string(i));
  }
}

double DecisionTree::predict(const FeatureRow& x) const {
  int i = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = x[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].value;
}

int DecisionTree::path_length(const FeatureRow& x) const {
  int i = 0, len = 0;
  while (!nodes_[i].is_leaf()) {
    const auto& n = nodes_[i];
    i = x[n.feature] <= n.threshold ? n.left : n.right;
    ++len;
  }
  return len;
}

int DecisionTree::depth() const {
  // Pre-order with explicit stack of (node, depth).
  int best = 0;
  std::vector<std::pair<int, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[i].is_leaf()) {
      stack.emplace_back(nodes_[i].left, d + 1);
      stack.emplace_back(nodes_[i].right, d + 1);
    }
  }
  return best;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const LabeledSet& data, const TreeParams& params) : data_(data), params_(params) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> idx(data_.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    grow(idx, 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t>& idx, int depth) {
    const int self = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (auto i : idx) {
      sum += data_.y[i];
      lo = std::min(lo, data_.y[i]);
      hi = std::max(hi, data_.y[i]);
    }
    const double mean = sum / static_cast<double>(idx.size());
    nodes_[self].value = mean;
    nodes_[self].n_samples = idx.size();

    if (depth >= params_.max_depth || idx.size() < params_.min_samples_split || lo == hi) return self;

    const Split best = find_split(idx, mean);
    if (best.feature < 0) return self;

    std::vector<std::size_t> left, right;
    left.reserve(idx.size());
    right.reserve(idx.size());
    for (auto i : idx) (data_.x[i][best.feature] <= best.threshold ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    nodes_[self].feature = best.feature;
    nodes_[self].threshold = best.threshold;
    const int l = grow(left, depth + 1);
    const int r = grow(right, depth + 1);
    nodes_[self].left = l;
    nodes_[self].right = r;
    return self;
  }

  Split find_split(const std::vector<std::size_t>& idx, double mean) {
    const std::size_t n = idx.size();
    const std::size_t min_leaf = params_.min_samples_leaf;
    Split best;
    if (n < 2 * min_leaf) return best;

    order_.assign(idx.begin(), idx.end());
    for (std::size_t f = 0; f < kNumFeatures; ++f) {
      if (!params_.use_feature[f]) continue;
      std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        const double va = data_.x[a][f], vb = data_.x[b][f];
        return va < vb || (va == vb && a < b);
      });

      // Centred targets keep the running sums well conditioned.
      double total_s = 0.0, total_q = 0.0;
      for (auto i : order_) {
        const double r = data_.y[i] - mean;
        total_s += r;
        total_q += r * r;
      }

      double ls = 0.0, lq = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r = data_.y[order_[k]] - mean;
        ls += r;
        lq += r * r;
        const std::size_t nl = k + 1, nr = n - nl;
        if (nl < min_leaf) continue;
        if (nr < min_leaf) break;
        const double xv = data_.x[order_[k]][f], xn = data_.x[order_[k + 1]][f];
        if (!(xv < xn)) continue;
        const double rs = total_s - ls, rq = total_q - lq;
        const double sse = (lq - ls * ls / nl) + (rq - rs * rs / nr);
        if (sse < best.sse) {
          best.sse = sse;
          best.feature = static_cast<int>(f);
          const double mid = xv + (xn - xv) / 2.0;
          best.threshold = mid < xn ? mid : xv;  // adjacent doubles
        }
      }
    }
    return best;
  }

  const LabeledSet& data_;
  const TreeParams& params_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> order_;
};

}  // namespace

DecisionTree fit_tree(const LabeledSet& train, const TreeParams& params) {
  params.validate();
  if (train.size() == 0) throw std::invalid_argument("fit_tree: empty training set");
  if (train.x.size() != train.y.size()) throw std::invalid_argument("fit_tree: x/y length mismatch");
  return DecisionTree(TreeBuilder(train, params).build(), params);
}

std::vector<PathCounts> decision_path_counts(const DecisionTree& tree, const std::vector<FeatureRow>& samples) {
  std::vector<PathCounts> out(samples.size(), PathCounts{});
  const auto& nodes = tree.nodes();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    int i = 0;
    while (!nodes[i].is_leaf()) {
      ++out[s][nodes[i].feature];
      i = samples[s][nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
    }
  }
  return out;
}

}  // namespace predatw
