#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "predatw/similarity.hpp"

using namespace predatw;

namespace {

FrameImage solid(int w, int h, Rgb c) { return FrameImage(w, h, ProjectionModel{}, c); }

}  // namespace

TEST_CASE("luminance") {
  CHECK(luminance(solid(8, 8, {0, 0, 0})).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(luminance(solid(8, 8, {255, 255, 255}))(3, 3) - 255.0) < 1e-9);
  CHECK(luminance(solid(8, 8, {255, 0, 0}))(0, 0) == doctest::Approx(76.245));
}

TEST_CASE("DCT against the naive definition") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 255);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 64> raw;
    Block8 b;
    for (int i = 0; i < 64; ++i) b(i / 8, i % 8) = raw[i] = u(gen);
    const auto ref = oracle::naive_dct8(raw);
    const Block8 got = dct2_8x8(b);
    for (int i = 0; i < 64; ++i) CHECK(std::abs(got(i / 8, i % 8) - ref[i]) < 1e-9);
  }
}

TEST_CASE("DC grid") {
  Plane constant = Plane::Constant(16, 16, 3.25);
  const auto g = dct_dc_grid(constant);
  CHECK(g.rows() == 2);
  CHECK(g.cols() == 2);
  CHECK(g.dc(1, 0) == doctest::Approx(8 * 3.25));

  Plane checker(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) checker(r, c) = ((r + c) % 2 ? 1 : -1) * 17.0;
  CHECK(std::abs(dct_dc_grid(checker).dc(0, 0)) < 1e-9);
  CHECK_THROWS_AS(dct_dc_grid(Plane::Zero(12, 16)), std::invalid_argument);
}

TEST_CASE("macroblock similarity counts") {
  const auto f = solid(32, 32, {100, 120, 90});
  const auto self = macroblock_similarity(f, f);
  CHECK(self.percent == 100.0);

  FrameImage a = solid(16, 16, {100, 100, 100});
  FrameImage b = a;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) b.set(x, y, {250, 250, 250});
  const auto one = macroblock_similarity(a, b);
  CHECK(one.n_macroblocks == 1);
  CHECK(one.n_similar == 0);
  CHECK(one.percent == 0.0);

  FrameImage c = solid(32, 32, {100, 100, 100});
  FrameImage d = c;
  for (int y = 16; y < 24; ++y)
    for (int x = 24; x < 32; ++x) d.set(x, y, {10, 10, 10});
  const auto r = macroblock_similarity(c, d);
  CHECK(r.n_macroblocks == 4);
  CHECK(r.n_similar == 3);
  CHECK(r.percent == 75.0);
  CHECK(frames_similar(r));

  CHECK_THROWS_AS(macroblock_similarity(solid(16, 16, {}), solid(32, 16, {})), std::invalid_argument);
}

TEST_CASE("odd DC grids get partial macroblocks") {
  const auto r = macroblock_similarity(solid(24, 8, {5, 5, 5}), solid(24, 8, {5, 5, 5}));
  CHECK(r.n_macroblocks == 2);
}

TEST_CASE("brightness") {
  CHECK(brightness(solid(8, 8, {0, 0, 0})) == 0.0);
  CHECK(brightness(solid(8, 8, {255, 255, 255})) == doctest::Approx(255.0).epsilon(1e-9));
  FrameImage half = solid(8, 8, {0, 0, 0});
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 8; ++x) half.set(x, y, {255, 255, 255});
  CHECK(brightness(half) == doctest::Approx(127.5));
  CHECK(brightness(half, BrightnessFormula::Luminance) == doctest::Approx(127.5));
}

TEST_CASE("feature variation") {
  FeatureVector p;
  p.gpu_time_ms = 2;
  p.l2_acc = 400;
  p.prev_atw_lat_ms = 4;
  p.n_threads = 80;
  p.brightness = 100;
  p.n_pixels = 1200;
  p.n_vertices = 40;
  p.n_draw_calls = 8;
  for (double v : feature_variation(p, p)) CHECK(v == 0.0);

  FeatureVector q = p;
  q.gpu_time_ms = 2.5;
  q.l2_acc = 500;
  q.prev_atw_lat_ms = 5;
  q.n_threads = 100;
  q.brightness = 125;
  q.n_pixels = 1500;
  q.n_vertices = 50;
  q.n_draw_calls = 10;
  for (double v : feature_variation(p, q)) CHECK(v == doctest::Approx(25.0));

  FeatureVector z;
  FeatureVector five;
  five.gpu_time_ms = 5;
  CHECK(feature_variation(z, five)[0] == kVariationCapPercent);
}
