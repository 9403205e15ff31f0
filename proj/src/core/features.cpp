#include "predatw/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace predatw {

namespace {
constexpr std::array<std::string_view, kNumFeatures> kNames = {
    "GPUTime", "L2Acc", "PrevATWLat", "#Threads", "Brightness", "#Pixels", "#Vertices", "#DrawCalls"};
}

std::string_view feature_name(Feature f) { return kNames[static_cast<std::size_t>(f)]; }

std::string_view feature_name(std::size_t index) {
  if (index >= kNumFeatures) throw std::out_of_range("feature index");
  return kNames[index];
}

std::array<double, kNumFeatures> FeatureVector::as_array() const {
  return {gpu_time_ms,
          static_cast<double>(l2_acc),
          prev_atw_lat_ms,
          static_cast<double>(n_threads),
          brightness,
          static_cast<double>(n_pixels),
          static_cast<double>(n_vertices),
          static_cast<double>(n_draw_calls)};
}

double FeatureVector::operator[](std::size_t index) const {
  switch (static_cast<Feature>(index)) {
    case Feature::GpuTime: return gpu_time_ms;
    case Feature::L2Acc: return static_cast<double>(l2_acc);
    case Feature::PrevAtwLat: return prev_atw_lat_ms;
    case Feature::NThreads: return static_cast<double>(n_threads);
    case Feature::Brightness: return brightness;
    case Feature::NPixels: return static_cast<double>(n_pixels);
    case Feature::NVertices: return static_cast<double>(n_vertices);
    case Feature::NDrawCalls: return static_cast<double>(n_draw_calls);
  }
  throw std::out_of_range("feature index");
}

void FeatureVector::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument(std::string(name) + " must be finite and >= 0");
  };
  check(gpu_time_ms, "gpu_time_ms");
  check(prev_atw_lat_ms, "prev_atw_lat_ms");
  check(brightness, "brightness");
  if (brightness > 255.0) throw std::invalid_argument("brightness must lie in [0, 255]");
}

}  // namespace predatw
