#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "predatw/predictors.hpp"
#include "predatw/rng.hpp"

namespace predatw {

LabeledSet to_labeled(const TraceDataset& d) {
  LabeledSet out;
  out.x.reserve(d.size());
  out.y.reserve(d.size());
  for (const auto& r : d.records) {
    out.x.push_back(r.features.as_array());
    out.y.push_back(r.atw_lat_ms);
  }
  return out;
}

double predict(const RegressionModel& model, const FeatureRow& x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

double predict(const RegressionModel& model, const FeatureVector& x) { return predict(model, x.as_array()); }

std::string model_kind(const RegressionModel& model) {
  switch (model.index()) {
    case 0: return "tree";
    case 1: return "linear";
    case 2: return "forest";
    default: return "boosted";
  }
}

EvalReport evaluate_mae(const RegressionModel& model, const LabeledSet& test) {
  if (test.size() == 0) throw std::invalid_argument("evaluate_mae: empty test set");
  EvalReport rep;
  rep.n = test.size();
  rep.per_sample.reserve(test.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double yhat = predict(model, test.x[i]);
    rep.per_sample.emplace_back(test.y[i], yhat);
    sum += std::abs(test.y[i] - yhat);
  }
  rep.mae_ms = sum / static_cast<double>(rep.n);
  return rep;
}

std::pair<TraceDataset, TraceDataset> split_dataset(const TraceDataset& d, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("split_dataset: test_fraction must lie in (0, 1)");
  const std::size_t n = d.size();
  if (n < 2) throw std::invalid_argument("split_dataset: need at least 2 records");

  const auto wanted = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  const std::size_t n_test = std::clamp<std::size_t>(wanted, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<bool> in_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  std::pair<TraceDataset, TraceDataset> out;
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? out.second : out.first).records.push_back(d.records[i]);
  return out;
}

}  // namespace predatw
