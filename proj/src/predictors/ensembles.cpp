#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "predatw/predictors.hpp"
#include "predatw/rng.hpp"

namespace predatw {
namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

LabeledSet subset(const LabeledSet& d, const std::vector<std::size_t>& idx) {
  LabeledSet out;
  out.x.reserve(idx.size());
  out.y.reserve(idx.size());
  for (auto i : idx) {
    out.x.push_back(d.x[i]);
    out.y.push_back(d.y[i]);
  }
  return out;
}

}  // namespace

double ForestModel::predict(const FeatureRow& x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

double BoostedModel::predict(const FeatureRow& x) const {
  double acc = base;
  for (const auto& s : stages) acc += s.learning_rate * s.tree.predict(x);
  return acc;
}

ForestModel fit_forest(const LabeledSet& train, const ForestParams& params, std::uint64_t seed) {
  params.tree.validate();
  const std::size_t n = train.size();
  if (n == 0) throw std::invalid_argument("fit_forest: empty training set");
  if (params.k == 0) throw std::invalid_argument("fit_forest: k must be >= 1");
  if (params.k > n / params.tree.min_samples_split)
    throw std::invalid_argument("fit_forest: k = " + std::to_string(params.k) + " parts of " + std::to_string(n) +
                                " samples leave fewer than min_samples_split = " +
                                std::to_string(params.tree.min_samples_split) + " per part");

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);

  ForestModel forest;
  forest.trees.reserve(params.k);
  for (std::size_t t = 0; t < params.k; ++t) {
    std::vector<std::size_t> part;
    if (params.bootstrap) {
      part.resize(n);
      for (auto& i : part) i = rng.below(n);
    } else {
      // Near-equal contiguous slices of the shuffled order.
      const std::size_t begin = t * n / params.k, end = (t + 1) * n / params.k;
      part.assign(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end));
      std::sort(part.begin(), part.end());  // k = 1 then reproduces fit_tree on the full set bit for bit
    }
    forest.trees.push_back(fit_tree(subset(train, part), params.tree));
  }
  return forest;
}

BoostedModel fit_boosted(const LabeledSet& train, const BoostParams& params) {
  if (params.rounds == 0) throw std::invalid_argument("fit_boosted: rounds must be >= 1");
  if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
    throw std::invalid_argument("fit_boosted: learning_rate must lie in (0, 1]");
  if (train.size() == 0) throw std::invalid_argument("fit_boosted: empty training set");

  BoostedModel model;
  model.base = std::accumulate(train.y.begin(), train.y.end(), 0.0) / static_cast<double>(train.size());

  std::vector<double> pred(train.size(), model.base);
  LabeledSet residual{train.x, std::vector<double>(train.size())};
  for (std::size_t r = 0; r < params.rounds; ++r) {
    for (std::size_t i = 0; i < train.size(); ++i) residual.y[i] = train.y[i] - pred[i];
    DecisionTree tree = fit_tree(residual, params.tree);
    for (std::size_t i = 0; i < train.size(); ++i) pred[i] += params.learning_rate * tree.predict(train.x[i]);
    model.stages.push_back({std::move(tree), params.learning_rate});
  }
  return model;
}

}  // namespace predatw
