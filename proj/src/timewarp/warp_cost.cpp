#include "predatw/warp_cost.hpp"

#include <cmath>
#include <stdexcept>

namespace predatw {

void WarpCostModel::validate() const {
  if (points.size() < 2) throw std::invalid_argument("WarpCostModel: need at least two calibration points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].cores > 0.0) || !(points[i].ms > 0.0) || !std::isfinite(points[i].cores) ||
        !std::isfinite(points[i].ms))
      throw std::invalid_argument("WarpCostModel: calibration values must be positive and finite");
    if (i > 0 && !(points[i].cores > points[i - 1].cores && points[i].ms < points[i - 1].ms))
      throw std::invalid_argument("WarpCostModel: cores must increase and times decrease along the table");
  }
}

double warp_kernel_cost_ms(unsigned cores, const WarpCostModel& model) {
  if (cores == 0) throw std::invalid_argument("warp_kernel_cost_ms: cores must be >= 1");
  model.validate();
  const auto& pts = model.points;
  const double lc = std::log(static_cast<double>(cores));

  std::size_t seg = 0;
  while (seg + 2 < pts.size() && lc > std::log(pts[seg + 1].cores)) ++seg;

  const double x0 = std::log(pts[seg].cores), x1 = std::log(pts[seg + 1].cores);
  const double y0 = std::log(pts[seg].ms), y1 = std::log(pts[seg + 1].ms);
  return std::exp(y0 + (lc - x0) * (y1 - y0) / (x1 - x0));
}

}  // namespace predatw
