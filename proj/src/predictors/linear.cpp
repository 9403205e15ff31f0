#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "predatw/predictors.hpp"

namespace predatw {

double LinearModel::predict(const FeatureRow& x) const {
  double acc = intercept;
  for (std::size_t i = 0; i < kNumFeatures; ++i) acc += weights[i] * x[i];
  return acc;
}

LinearModel fit_linear(const LabeledSet& train) {
  constexpr std::size_t kParams = kNumFeatures + 1;
  if (train.size() < kParams)
    throw std::invalid_argument("fit_linear: " + std::to_string(train.size()) + " samples cannot determine " +
                                std::to_string(kParams) + " parameters (8 weights + intercept)");

  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd a(n, kParams);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < kNumFeatures; ++f) a(i, static_cast<Eigen::Index>(f)) = train.x[i][f];
    a(i, kNumFeatures) = 1.0;
    b(i) = train.y[i];
  }

  // Complete orthogonal decomposition yields the minimum-norm least-squares solution.
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd sol = cod.solve(b);

  LinearModel m;
  for (std::size_t f = 0; f < kNumFeatures; ++f) m.weights[f] = sol(static_cast<Eigen::Index>(f));
  m.intercept = sol(kNumFeatures);
  if (!sol.allFinite()) throw std::runtime_error("fit_linear: solution is not finite");
  return m;
}

}  // namespace predatw
