#pragma once

#include <vector>

namespace predatw {

struct CalibrationPoint {
  double cores;
  double ms;
};

/// Warp-kernel execution time as a function of the cores it runs on.
///
/// Piecewise-linear interpolation in log(cores)-log(ms) space through a
/// calibration table; the end segments extend the curve beyond the table.
/// Default points: SM1/SM2/SM3 partitions of a 16-SM GPU (2, 4, 8 cores)
/// and the standalone kernel on the full GPU (16 cores).
struct WarpCostModel {
  std::vector<CalibrationPoint> points = {{2, 18.71}, {4, 9.39}, {8, 4.0}, {16, 2.40}};

  /// Throws std::invalid_argument unless there are >= 2 points with strictly
  /// increasing cores and strictly decreasing, positive times.
  void validate() const;
};

/// Throws std::invalid_argument for cores == 0. Strictly decreasing in cores.
double warp_kernel_cost_ms(unsigned cores, const WarpCostModel& model);

}  // namespace predatw
