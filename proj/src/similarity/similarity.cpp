#include "predatw/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace predatw {
namespace {

constexpr double kWr = 0.299, kWg = 0.587, kWb = 0.114;

Block8 make_dct_basis() {
  Block8 c;
  for (int k = 0; k < kDctBlock; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / kDctBlock) : std::sqrt(2.0 / kDctBlock);
    for (int n = 0; n < kDctBlock; ++n)
      c(k, n) = scale * std::cos(std::numbers::pi * (2 * n + 1) * k / (2.0 * kDctBlock));
  }
  return c;
}

const Block8& dct_basis() {
  static const Block8 basis = make_dct_basis();
  return basis;
}

}  // namespace

Plane luminance(const FrameImage& frame) {
  Plane y(frame.height(), frame.width());
  const auto rgb = frame.rgb();
  for (int r = 0; r < frame.height(); ++r) {
    for (int c = 0; c < frame.width(); ++c) {
      const std::size_t i = (static_cast<std::size_t>(r) * frame.width() + c) * 3;
      y(r, c) = kWr * rgb[i] + kWg * rgb[i + 1] + kWb * rgb[i + 2];
    }
  }
  return y;
}

Block8 dct2_8x8(const Block8& block) {
  const Block8& c = dct_basis();
  return c * block * c.transpose();
}

DcGrid dct_dc_grid(const Plane& luma) {
  if (luma.rows() % kDctBlock != 0 || luma.cols() % kDctBlock != 0 || luma.rows() == 0 || luma.cols() == 0)
    throw std::invalid_argument("dct_dc_grid: dimensions must be non-zero multiples of 8 (got " +
                                std::to_string(luma.rows()) + "x" + std::to_string(luma.cols()) + ")");
  DcGrid grid{Plane(luma.rows() / kDctBlock, luma.cols() / kDctBlock)};
  for (int br = 0; br < grid.rows(); ++br) {
    for (int bc = 0; bc < grid.cols(); ++bc) {
      const Block8 block = luma.block<kDctBlock, kDctBlock>(br * kDctBlock, bc * kDctBlock);
      grid.dc(br, bc) = dct2_8x8(block)(0, 0);
    }
  }
  return grid;
}

SimilarityReport macroblock_similarity(const DcGrid& a, const DcGrid& b, const SimilarityConfig& cfg) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("macroblock_similarity: DC grids differ in size");
  SimilarityReport rep;
  for (int mr = 0; mr < a.rows(); mr += 2) {
    for (int mc = 0; mc < a.cols(); mc += 2) {
      bool similar = true;
      for (int r = mr; r < std::min(mr + 2, a.rows()); ++r) {
        for (int c = mc; c < std::min(mc + 2, a.cols()); ++c) {
          const double da = a.dc(r, c), db = b.dc(r, c);
          const double scale = std::max({std::abs(da), std::abs(db), cfg.epsilon});
          if (std::abs(da - db) > cfg.tau * scale) similar = false;
        }
      }
      ++rep.n_macroblocks;
      if (similar) ++rep.n_similar;
    }
  }
  rep.percent = rep.n_macroblocks == 0 ? 0.0 : 100.0 * static_cast<double>(rep.n_similar) / rep.n_macroblocks;
  return rep;
}

SimilarityReport macroblock_similarity(const FrameImage& a, const FrameImage& b, const SimilarityConfig& cfg) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("macroblock_similarity: frames differ in size");
  return macroblock_similarity(dct_dc_grid(luminance(a)), dct_dc_grid(luminance(b)), cfg);
}

bool frames_similar(const SimilarityReport& report, const SimilarityConfig& cfg) {
  return report.percent >= cfg.frame_threshold_pct;
}

double brightness(const FrameImage& frame, BrightnessFormula formula) {
  const auto rgb = frame.rgb();
  double sum = 0.0;
  for (std::size_t i = 0; i < rgb.size(); i += 3) {
    const double r = rgb[i], g = rgb[i + 1], b = rgb[i + 2];
    sum += formula == BrightnessFormula::RootMeanSquare ? std::sqrt(kWr * r * r + kWg * g * g + kWb * b * b)
                                                        : kWr * r + kWg * g + kWb * b;
  }
  return sum / (rgb.size() / 3);
}

std::array<double, kNumFeatures> feature_variation(const FeatureVector& prev, const FeatureVector& curr,
                                                   double epsilon) {
  const auto p = prev.as_array();
  const auto c = curr.as_array();
  std::array<double, kNumFeatures> out{};
  for (std::size_t i = 0; i < kNumFeatures; ++i)
    out[i] = std::min(kVariationCapPercent, 100.0 * std::abs(c[i] - p[i]) / std::max(std::abs(p[i]), epsilon));
  return out;
}

}  // namespace predatw
