#pragma once

// Slow reference implementations the fast paths are checked against.

#include <array>
#include <cstdint>
#include <vector>

#include "predatw/frame_image.hpp"
#include "predatw/pose.hpp"
#include "predatw/predictors.hpp"

namespace oracle {

// Full 8x8 DCT-II straight from the definition, row-major in and out.
std::array<double, 64> naive_dct8(const std::array<double, 64>& block);

struct RootSplit {
  int feature = -1;
  double threshold = 0.0;
  double sse = 0.0;
};

// Tries every feature and every midpoint between distinct sorted values,
// recomputing both child SSEs from scratch.
RootSplit brute_root_split(const predatw::LabeledSet& data, std::size_t min_leaf);

// Per-pixel ray cast through world space. `ambiguous` marks pixels whose
// source lands within 1e-6 px of the raster border.
struct WarpResult {
  predatw::FrameImage image;
  std::vector<bool> ambiguous;
};
WarpResult raycast_warp(const predatw::FrameImage& frame, const predatw::Pose& render, const predatw::Pose& display,
                        predatw::Rgb fill);

// Least squares through the normal equations, Gaussian elimination with
// partial pivoting. Returns intercept followed by weights.
std::vector<double> normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y);

double correlation(const std::vector<double>& a, const std::vector<double>& b);

predatw::LabeledSet random_dataset(std::size_t n, std::uint64_t seed);

}  // namespace oracle
