#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "predatw/predictors.hpp"

using namespace predatw;

TEST_CASE("constant target gives a single leaf") {
  LabeledSet d = oracle::random_dataset(40, 1);
  std::fill(d.y.begin(), d.y.end(), 2.5);
  const auto t = fit_tree(d);
  CHECK(t.nodes().size() == 1);
  CHECK(t.predict(d.x[3]) == 2.5);
}

TEST_CASE("two points split at the midpoint") {
  LabeledSet d;
  FeatureRow a{}, b{};
  b[0] = 10;
  d.x = {a, b};
  d.y = {0, 10};
  TreeParams p;
  p.max_depth = 1;
  p.min_samples_leaf = 1;
  p.min_samples_split = 2;
  const auto t = fit_tree(d, p);
  REQUIRE(t.nodes().size() == 3);
  CHECK(t.nodes()[0].feature == 0);
  CHECK(t.nodes()[0].threshold == 5.0);
  CHECK(t.predict(a) == 0.0);
  CHECK(t.predict(b) == 10.0);
}

TEST_CASE("root split matches brute force") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto d = oracle::random_dataset(50, seed);
    TreeParams p;
    p.max_depth = 3;
    const auto t = fit_tree(d, p);
    const auto ref = oracle::brute_root_split(d, p.min_samples_leaf);
    const auto& root = t.nodes()[0];
    REQUIRE(root.feature == ref.feature);
    CHECK(root.threshold == doctest::Approx(ref.threshold).epsilon(1e-12));

    // SSE of the tree's own root partition, recomputed directly.
    std::vector<double> l, r;
    for (std::size_t i = 0; i < d.size(); ++i) (d.x[i][root.feature] <= root.threshold ? l : r).push_back(d.y[i]);
    auto sse = [](const std::vector<double>& v) {
      const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
      double s = 0;
      for (double y : v) s += (y - m) * (y - m);
      return s;
    };
    CHECK(sse(l) + sse(r) == doctest::Approx(ref.sse).epsilon(1e-10));
    CHECK(t.depth() <= 3);
  }
}

TEST_CASE("tree hyperparameters bound the shape") {
  const auto d = oracle::random_dataset(500, 7);
  TreeParams p;
  p.max_depth = 4;
  p.min_samples_leaf = 20;
  const auto t = fit_tree(d, p);
  CHECK(t.depth() <= 4);
  for (const auto& n : t.nodes())
    if (n.is_leaf()) CHECK(n.n_samples >= 20);
  for (const auto& x : d.x) CHECK(t.path_length(x) <= 4);

  p.use_feature.fill(false);
  p.use_feature[2] = true;
  const auto only2 = fit_tree(d, p);
  CHECK(only2.nodes().size() > 1);
  for (const auto& n : only2.nodes())
    if (!n.is_leaf()) CHECK(n.feature == 2);

  TreeParams bad;
  bad.min_samples_leaf = 0;
  CHECK_THROWS_AS(fit_tree(d, bad), std::invalid_argument);
}

TEST_CASE("linear fit matches the normal equations") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-2, 2);
  LabeledSet d;
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 200; ++i) {
    FeatureRow r;
    for (auto& v : r) v = u(gen);
    d.x.push_back(r);
    xs.emplace_back(r.begin(), r.end());
    d.y.push_back(0.7 * r[0] - 1.3 * r[5] + 0.2 * r[7] + 4 + 0.1 * u(gen));
  }
  const auto m = fit_linear(d);
  const auto ref = oracle::normal_equations(xs, d.y);
  CHECK(m.intercept == doctest::Approx(ref[0]).epsilon(1e-8));
  for (std::size_t j = 0; j < kNumFeatures; ++j) CHECK(std::abs(m.weights[j] - ref[j + 1]) < 1e-8);
}

TEST_CASE("linear fit recovers exact data") {
  LabeledSet d;
  for (int i = 0; i < 30; ++i) {
    FeatureRow r{};
    r[0] = 0.5 * i;
    d.x.push_back(r);
    d.y.push_back(2 * r[0] + 1);
  }
  const auto m = fit_linear(d);
  CHECK(std::abs(m.weights[0] - 2) < 1e-6);
  CHECK(std::abs(m.intercept - 1) < 1e-6);
  for (std::size_t j = 1; j < kNumFeatures; ++j) CHECK(std::abs(m.weights[j]) < 1e-6);

  std::fill(d.y.begin(), d.y.end(), 4.0);
  const auto c = fit_linear(d);
  CHECK(std::abs(c.intercept - 4) < 1e-9);
  CHECK(std::abs(c.weights[0]) < 1e-9);

  // Duplicated column: minimum-norm split of the weight.
  for (auto& r : d.x) r[1] = r[0];
  for (std::size_t i = 0; i < d.size(); ++i) d.y[i] = 3 * d.x[i][0];
  const auto dup = fit_linear(d);
  CHECK(std::isfinite(dup.weights[0]));
  CHECK(dup.weights[0] == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(dup.weights[1] == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("forest") {
  const auto d = oracle::random_dataset(300, 9);
  ForestParams one;
  one.k = 1;
  const auto f1 = fit_forest(d, one, 5);
  const auto t = fit_tree(d, one.tree);
  for (const auto& x : d.x) CHECK(f1.predict(x) == t.predict(x));

  ForestParams p;
  p.k = 10;
  CHECK(fit_forest(d, p, 77) == fit_forest(d, p, 77));
  CHECK_FALSE(fit_forest(d, p, 77) == fit_forest(d, p, 78));
  p.bootstrap = true;
  CHECK(fit_forest(d, p, 77).trees.size() == 10);

  p.k = 1000;
  p.bootstrap = false;
  CHECK_THROWS_AS(fit_forest(d, p, 1), std::invalid_argument);
}

TEST_CASE("forest over two constant halves predicts their mean") {
  // Every tree sees a random half mixture; targets depend on nothing the
  // trees can split on, so each tree is a leaf and the forest averages.
  LabeledSet d;
  for (int i = 0; i < 40; ++i) {
    d.x.push_back(FeatureRow{});
    d.y.push_back(i % 2 ? 6.0 : 2.0);
  }
  ForestParams p;
  p.k = 2;
  const auto f = fit_forest(d, p, 3);
  double mean_of_parts = 0;
  for (const auto& t : f.trees) mean_of_parts += t.predict(FeatureRow{}) / 2;
  CHECK(f.predict(FeatureRow{}) == doctest::Approx(mean_of_parts));
  CHECK(f.predict(FeatureRow{}) == doctest::Approx(4.0));
}

TEST_CASE("boosting") {
  const auto d = oracle::random_dataset(200, 21);
  BoostParams bad;
  bad.rounds = 0;
  CHECK_THROWS_AS(fit_boosted(d, bad), std::invalid_argument);

  // A single depth-1 stage at rate 1 on a two-level step fits exactly.
  LabeledSet step;
  for (int i = 0; i < 40; ++i) {
    FeatureRow r{};
    r[3] = i;
    step.x.push_back(r);
    step.y.push_back(i < 15 ? 1.0 : 7.0);
  }
  BoostParams one;
  one.rounds = 1;
  one.learning_rate = 1.0;
  one.tree.max_depth = 1;
  const auto b = fit_boosted(step, one);
  const auto t = fit_tree(step, one.tree);
  for (std::size_t i = 0; i < step.size(); ++i) {
    CHECK(std::abs(b.predict(step.x[i]) - step.y[i]) < 1e-12);
    CHECK(b.predict(step.x[i]) == doctest::Approx(t.predict(step.x[i])));
  }

  // Training squared error never rises from one stage to the next.
  BoostParams p;
  p.rounds = 10;
  p.tree.max_depth = 2;
  const auto m = fit_boosted(d, p);
  double prev = 1e300;
  for (std::size_t k = 0; k <= m.stages.size(); ++k) {
    BoostedModel partial{m.base, std::vector<BoostStage>(m.stages.begin(), m.stages.begin() + k)};
    double sse = 0;
    for (std::size_t i = 0; i < d.size(); ++i) sse += std::pow(partial.predict(d.x[i]) - d.y[i], 2);
    CHECK(sse <= prev + 1e-9);
    prev = sse;
  }
}

TEST_CASE("evaluate_mae") {
  LabeledSet t;
  t.x = {FeatureRow{}, FeatureRow{}};
  t.y = {3, 5};
  LinearModel m;
  m.intercept = 2;
  auto r = evaluate_mae(m, t);
  CHECK(r.mae_ms == doctest::Approx(2.0));

  // actual (3,5), predicted (2,3) through a one-weight model.
  t.x[0][0] = 0;
  t.x[1][0] = 1;
  m.weights[0] = 1;
  r = evaluate_mae(m, t);
  CHECK(r.mae_ms == doctest::Approx(1.5));
  CHECK(r.per_sample[1] == std::pair<double, double>{5, 3});

  std::swap(t.x[0], t.x[1]);
  std::swap(t.y[0], t.y[1]);
  CHECK(evaluate_mae(m, t).mae_ms == doctest::Approx(1.5));

  t.y = {2, 3};
  std::swap(t.x[0], t.x[1]);
  CHECK(evaluate_mae(m, t).mae_ms == 0.0);
}

TEST_CASE("split_dataset") {
  TraceDataset d;
  for (std::uint64_t i = 0; i < 100; ++i) d.records.push_back({i, {}, 0.0});
  const auto [train, test] = split_dataset(d, 0.2, 4);
  CHECK(train.size() == 80);
  CHECK(test.size() == 20);
  const auto again = split_dataset(d, 0.2, 4);
  CHECK(again.first == train);

  std::set<std::uint64_t> seen;
  for (const auto& r : train.records) seen.insert(r.frame_id);
  for (const auto& r : test.records) CHECK(seen.insert(r.frame_id).second);
  CHECK(seen.size() == 100);
}

TEST_CASE("decision path counts") {
  const auto d = oracle::random_dataset(300, 5);
  LabeledSet flat = d;
  std::fill(flat.y.begin(), flat.y.end(), 1.0);
  for (const auto& row : decision_path_counts(fit_tree(flat), d.x))
    for (auto c : row) CHECK(c == 0);

  TreeParams stump;
  stump.max_depth = 1;
  for (const auto& row : decision_path_counts(fit_tree(d, stump), d.x)) {
    CHECK(row[0] == 1);
    CHECK(std::accumulate(row.begin(), row.end(), 0u) == 1);
  }

  const auto t = fit_tree(d);
  const auto counts = decision_path_counts(t, d.x);
  for (std::size_t s = 0; s < d.size(); ++s) {
    // Re-walk the tree by hand.
    PathCounts mine{};
    int i = 0;
    while (!t.nodes()[i].is_leaf()) {
      const auto& n = t.nodes()[i];
      ++mine[n.feature];
      i = d.x[s][n.feature] <= n.threshold ? n.left : n.right;
    }
    CHECK(counts[s] == mine);
    CHECK(static_cast<int>(std::accumulate(mine.begin(), mine.end(), 0u)) == t.path_length(d.x[s]));
  }
}

TEST_CASE("model files round trip") {
  const auto d = oracle::random_dataset(300, 12);
  ForestParams fp;
  fp.k = 4;
  BoostParams bp;
  bp.rounds = 5;
  const std::vector<RegressionModel> models = {fit_tree(d), fit_linear(d), fit_forest(d, fp, 1), fit_boosted(d, bp)};
  for (const auto& m : models) {
    std::stringstream buf;
    write_model(m, buf);
    const auto back = read_model(buf);
    CHECK(model_kind(back) == model_kind(m));
    CHECK(back == m);
  }
  std::stringstream junk("not a model\n");
  CHECK_THROWS(read_model(junk));
}
