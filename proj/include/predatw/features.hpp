#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace predatw {

inline constexpr std::size_t kNumFeatures = 8;

/// Canonical feature order. Every model, file and report uses this order.
enum class Feature : std::size_t {
  GpuTime = 0,
  L2Acc,
  PrevAtwLat,
  NThreads,
  Brightness,
  NPixels,
  NVertices,
  NDrawCalls,
};

/// CamelCase names as shown in reports (GPUTime, L2Acc, ...).
std::string_view feature_name(Feature f);
std::string_view feature_name(std::size_t index);

/// Per-frame predictor inputs. `gpu_time_ms`, `l2_acc`, `prev_atw_lat_ms`,
/// `brightness` and `n_pixels` describe the previous frame; `n_threads`,
/// `n_vertices` and `n_draw_calls` the frame being rendered.
struct FeatureVector {
  double gpu_time_ms = 0.0;
  std::uint64_t l2_acc = 0;
  double prev_atw_lat_ms = 0.0;
  std::uint64_t n_threads = 0;
  double brightness = 0.0;
  std::uint64_t n_pixels = 0;
  std::uint64_t n_vertices = 0;
  std::uint64_t n_draw_calls = 0;

  std::array<double, kNumFeatures> as_array() const;
  double operator[](std::size_t index) const;

  /// Throws std::invalid_argument on non-finite/negative reals or brightness outside [0, 255].
  void validate() const;

  bool operator==(const FeatureVector&) const = default;
};

}  // namespace predatw
