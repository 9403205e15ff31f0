#include <algorithm>
#include <cmath>
#include <string>

#include "predatw/error.hpp"
#include "predatw/rng.hpp"
#include "predatw/similarity.hpp"
#include "predatw/workload.hpp"

namespace predatw {

void WorkloadSpec::validate() const {
  auto bad = [](const std::string& what) { throw ConfigError("workload." + what); };
  if (n_frames < 1) bad("n_frames must be >= 1");
  if (!(render_mean_ms > 0.0) || !std::isfinite(render_mean_ms)) bad("render_mean_ms must be positive");
  if (!(render_jitter >= 0.0) || !std::isfinite(render_jitter)) bad("render_jitter must be >= 0");
  if (!(render_min_ms > 0.0) || !(render_max_ms >= render_min_ms) || render_max_ms > 22.0)
    bad("render_min_ms/render_max_ms must satisfy 0 < min <= max <= 22");
  for (std::size_t c = 0; c < kChannels; ++c) {
    const std::string idx = std::to_string(c);
    if (!(autocorrelation[c] >= 0.0 && autocorrelation[c] < 1.0)) bad("autocorrelation[" + idx + "] must lie in [0, 1)");
    if (!(sigma[c] >= 0.0) || !std::isfinite(sigma[c])) bad("sigma[" + idx + "] must be >= 0");
    if (!(mean[c] > 0.0) || !std::isfinite(mean[c])) bad("mean[" + idx + "] must be positive");
  }
  if (mean[static_cast<std::size_t>(Channel::Brightness)] > 255.0) bad("brightness mean must be <= 255");
  if (!(scene_cut_rate >= 0.0 && scene_cut_rate <= 1.0)) bad("scene_cut_rate must lie in [0, 1]");
}

namespace {

std::uint64_t count(double v, std::uint64_t floor_value) {
  return std::max<std::uint64_t>(floor_value, static_cast<std::uint64_t>(std::llround(std::max(0.0, v))));
}

}  // namespace

std::vector<FrameJob> generate(const WorkloadSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::array<double, kChannels> z{};
  for (double& v : z) v = rng.normal();

  auto level = [&](Channel ch) {
    const auto c = static_cast<std::size_t>(ch);
    const double s = spec.sigma[c];
    return spec.mean[c] * std::exp(s * z[c] - 0.5 * s * s);
  };
  auto ratio = [&](Channel ch) { return level(ch) / spec.mean[static_cast<std::size_t>(ch)]; };

  std::vector<FrameJob> jobs;
  jobs.reserve(spec.n_frames);
  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    if (i > 0) {
      const bool cut = spec.profile == ComplexityProfile::SceneCut && rng.bernoulli(spec.scene_cut_rate);
      for (std::size_t c = 0; c < kChannels; ++c) {
        const double phi = spec.autocorrelation[c];
        const double e = rng.normal();
        z[c] = cut ? e : phi * z[c] + std::sqrt(1.0 - phi * phi) * e;
      }
    }
    const double jitter = rng.normal();

    FrameJob job;
    job.frame_id = i;
    const double geometry =
        0.45 * ratio(Channel::Vertices) + 0.25 * ratio(Channel::DrawCalls) + 0.30 * ratio(Channel::Pixels);
    const double noise = std::exp(spec.render_jitter * jitter - 0.5 * spec.render_jitter * spec.render_jitter);
    job.render_time_ms =
        std::clamp(spec.render_mean_ms * geometry * ratio(Channel::Shading) * noise, spec.render_min_ms, spec.render_max_ms);

    FeatureVector& f = job.features;
    f.gpu_time_ms = job.render_time_ms;
    f.prev_atw_lat_ms = kSeedPrevAtwLatMs;
    f.n_vertices = count(level(Channel::Vertices), 0);
    f.n_draw_calls = count(level(Channel::DrawCalls), 1);
    f.n_pixels = count(level(Channel::Pixels), 0);
    f.n_threads = count(level(Channel::Threads), 0);
    // Cache traffic follows geometry and fill, plus its own locality term.
    f.l2_acc = count(level(Channel::L2Acc) * (0.5 * ratio(Channel::Vertices) + 0.5 * ratio(Channel::Pixels)), 0);
    const auto b = static_cast<std::size_t>(Channel::Brightness);
    f.brightness = std::clamp(spec.mean[b] + spec.sigma[b] * z[b], 0.0, 255.0);

    job.draw_call_profile.assign(f.n_draw_calls, job.render_time_ms / static_cast<double>(f.n_draw_calls));
    jobs.push_back(std::move(job));
  }
  return jobs;
}

TraceDataset jobs_to_trace(const std::vector<FrameJob>& jobs) {
  TraceDataset ds;
  ds.records.reserve(jobs.size());
  for (const auto& j : jobs) {
    FeatureVector f = j.features;
    f.prev_atw_lat_ms = kSeedPrevAtwLatMs;
    ds.records.push_back({j.frame_id, f, kSeedPrevAtwLatMs});
  }
  return ds;
}

std::vector<FrameJob> jobs_from_trace(const TraceDataset& trace) {
  std::vector<FrameJob> jobs;
  jobs.reserve(trace.records.size());
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    const std::size_t line = i + 2;  // header is line 1
    if (r.features.n_draw_calls == 0) throw ParseError("#DrawCalls must be >= 1", line);
    if (!(r.features.gpu_time_ms > 0.0)) throw ParseError("GPUTime must be positive", line);
    FrameJob j;
    j.frame_id = r.frame_id;
    j.render_time_ms = r.features.gpu_time_ms;
    j.features = r.features;
    j.draw_call_profile.assign(r.features.n_draw_calls, j.render_time_ms / static_cast<double>(r.features.n_draw_calls));
    jobs.push_back(std::move(j));
  }
  return jobs;
}

std::vector<FrameJob> ingest_csv(const std::filesystem::path& path) { return jobs_from_trace(load_trace(path)); }

double stable_pair_fraction(const std::vector<FrameJob>& jobs, double limit_percent) {
  if (jobs.size() < 2) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i < jobs.size(); ++i) {
    const auto v = feature_variation(jobs[i - 1].features, jobs[i].features);
    if (std::all_of(v.begin(), v.end(), [&](double p) { return p <= limit_percent; })) ++ok;
  }
  return static_cast<double>(ok) / static_cast<double>(jobs.size() - 1);
}

}  // namespace predatw
