#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "predatw/frame_image.hpp"
#include "predatw/gpusim.hpp"
#include "predatw/pose.hpp"
#include "predatw/trace.hpp"

namespace predatw {

/// Latent per-frame processes. Shading is the per-pixel shader cost: it drives
/// render time but no other recorded metric.
enum class Channel : std::size_t { L2Acc = 0, Threads, Brightness, Pixels, Vertices, DrawCalls, Shading };
inline constexpr std::size_t kChannels = 7;

enum class ComplexityProfile { Steady, SceneCut };

struct WorkloadSpec {
  std::size_t n_frames = 5000;
  double render_mean_ms = 1.4;  // full-GPU render time of an average frame
  double render_jitter = 0.08;  // log-space sd of per-frame noise
  double render_min_ms = 0.5;
  double render_max_ms = 2.15;
  // Per channel: AR(1) coefficient, log-space sd (brightness: linear sd), mean level.
  std::array<double, kChannels> autocorrelation = {0.95, 0.95, 0.95, 0.95, 0.95, 0.95, 0.95};
  std::array<double, kChannels> sigma = {0.15, 0.15, 25.0, 0.10, 0.20, 0.20, 0.25};
  std::array<double, kChannels> mean = {4.0e6, 2.0e6, 110.0, 2.6e6, 8.0e5, 300.0, 1.0};
  ComplexityProfile profile = ComplexityProfile::SceneCut;
  double scene_cut_rate = 1.0 / 200.0;  // per frame
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Jobs with ids 0..n-1. Each job's features are its own metrics with
/// gpu_time_ms = render_time_ms; the draw-call profile splits the render time
/// uniformly across n_draw_calls.
std::vector<FrameJob> generate(const WorkloadSpec& spec);

/// Trace view of the jobs (unlabeled: every ATW latency is the seed value).
TraceDataset jobs_to_trace(const std::vector<FrameJob>& jobs);

/// Jobs from a trace CSV: GPUTime is the render demand. Throws ParseError for
/// schema violations and for rows with no draw calls or no render time.
std::vector<FrameJob> ingest_csv(const std::filesystem::path& path);
std::vector<FrameJob> jobs_from_trace(const TraceDataset& trace);

/// Share of consecutive job pairs whose every varying metric changes by at most
/// `limit_percent` (feature_variation semantics).
double stable_pair_fraction(const std::vector<FrameJob>& jobs, double limit_percent = 25.0);

// Synthetic imagery: a smooth procedural panorama viewed through a head pose.

struct PanoramaScene {
  std::uint64_t seed = 1;
  int n_waves = 12;
  double max_frequency = 6.0;  // radians^-1 on the unit sphere
};

FrameImage render_view(const PanoramaScene& scene, const Pose& view, int width, int height,
                       const ProjectionModel& projection);

/// Head-orientation random walk, one pose per 11.11 ms frame.
std::vector<Pose> head_trajectory(std::size_t n, double step_sd_deg, std::uint64_t seed);

}  // namespace predatw
