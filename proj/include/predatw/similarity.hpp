#pragma once

#include <Eigen/Core>
#include <array>

#include "predatw/features.hpp"
#include "predatw/frame_image.hpp"

namespace predatw {

using Plane = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Block8 = Eigen::Matrix<double, 8, 8, Eigen::RowMajor>;

inline constexpr int kDctBlock = 8;

/// Y = 0.299 R + 0.587 G + 0.114 B per pixel (rows = height).
Plane luminance(const FrameImage& frame);

/// Orthonormal 2-D DCT-II of one 8x8 block.
Block8 dct2_8x8(const Block8& block);

/// One DC coefficient per 8x8 block.
struct DcGrid {
  Plane dc;
  int rows() const { return static_cast<int>(dc.rows()); }
  int cols() const { return static_cast<int>(dc.cols()); }
};

/// Throws std::invalid_argument unless both dimensions are multiples of 8.
DcGrid dct_dc_grid(const Plane& luma);

struct SimilarityConfig {
  double tau = 0.10;                // relative DC tolerance
  double epsilon = 1e-9;            // floor of the relative-difference denominator
  double frame_threshold_pct = 50;  // frames are similar above this share of macroblocks
};

struct SimilarityReport {
  std::size_t n_macroblocks = 0;
  std::size_t n_similar = 0;
  double percent = 0.0;  // 100 * n_similar / n_macroblocks

  bool operator==(const SimilarityReport&) const = default;
};

/// Compares 2x2 groups of DC coefficients. A macroblock matches when every DC
/// pair it contains satisfies |a - b| <= tau * max(|a|, |b|, epsilon). Grids
/// with an odd dimension get partial edge macroblocks, compared over the DCs
/// they hold. Throws std::invalid_argument on a dimension mismatch.
SimilarityReport macroblock_similarity(const DcGrid& a, const DcGrid& b, const SimilarityConfig& cfg = {});
SimilarityReport macroblock_similarity(const FrameImage& a, const FrameImage& b, const SimilarityConfig& cfg = {});

bool frames_similar(const SimilarityReport& report, const SimilarityConfig& cfg = {});

enum class BrightnessFormula {
  RootMeanSquare,  // sqrt(0.299 R² + 0.587 G² + 0.114 B²)
  Luminance,       // 0.299 R + 0.587 G + 0.114 B
};

/// Mean perceived brightness over all pixels, in [0, 255].
double brightness(const FrameImage& frame, BrightnessFormula formula = BrightnessFormula::RootMeanSquare);

inline constexpr double kVariationCapPercent = 1000.0;

/// Per feature 100·|curr − prev| / max(|prev|, epsilon), capped at 1000%.
std::array<double, kNumFeatures> feature_variation(const FeatureVector& prev, const FeatureVector& curr,
                                                   double epsilon = 1e-9);

}  // namespace predatw
