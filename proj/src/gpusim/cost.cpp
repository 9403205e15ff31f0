#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "predatw/error.hpp"
#include "predatw/gpusim.hpp"

namespace predatw {

void GpuModel::validate() const {
  if (n_sms < 1) throw ConfigError("gpu.n_sms must be >= 1");
  if (!(clock_ghz > 0.0) || !std::isfinite(clock_ghz)) throw ConfigError("gpu.clock_ghz must be positive");
}

std::string_view mode_name(SharingMode m) {
  switch (m) {
    case SharingMode::Shared: return "shared";
    case SharingMode::SM1: return "SM1";
    case SharingMode::SM2: return "SM2";
    case SharingMode::SM3: return "SM3";
  }
  return "?";
}

SharingMode parse_mode(std::string_view s) {
  std::string lower(s);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "shared") return SharingMode::Shared;
  if (lower == "sm1") return SharingMode::SM1;
  if (lower == "sm2") return SharingMode::SM2;
  if (lower == "sm3") return SharingMode::SM3;
  throw ConfigError("unknown sharing mode '" + std::string(s) + "'");
}

unsigned atw_cores(SharingMode m, const GpuModel& gpu) {
  switch (m) {
    case SharingMode::Shared: return gpu.n_sms;
    case SharingMode::SM1: return std::max(1u, gpu.n_sms / 8);
    case SharingMode::SM2: return std::max(1u, gpu.n_sms / 4);
    case SharingMode::SM3: return std::max(1u, gpu.n_sms / 2);
  }
  return gpu.n_sms;
}

void FrameJob::validate() const {
  if (!(render_time_ms > 0.0) || !std::isfinite(render_time_ms))
    throw std::invalid_argument("frame " + std::to_string(frame_id) + ": render_time_ms must be positive");
  if (draw_call_profile.empty())
    throw std::invalid_argument("frame " + std::to_string(frame_id) + ": empty draw-call profile");
  double sum = 0.0;
  for (double q : draw_call_profile) {
    if (!(q > 0.0) || !std::isfinite(q))
      throw std::invalid_argument("frame " + std::to_string(frame_id) + ": draw-call quanta must be positive");
    sum += q;
  }
  if (std::abs(sum - render_time_ms) > 1e-9 * std::max(1.0, render_time_ms))
    throw std::invalid_argument("frame " + std::to_string(frame_id) + ": draw-call quanta do not sum to render time");
  features.validate();
}

std::string_view contention_name(Contention c) {
  switch (c) {
    case Contention::Low: return "low";
    case Contention::Med: return "med";
    case Contention::High: return "high";
  }
  return "?";
}

void ContentionModel::validate() const {
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  for (std::size_t s = 0; s < kContentionStates; ++s) {
    const std::string name(contention_name(static_cast<Contention>(s)));
    if (!(warp_multiplier[s] >= 1.0) || !std::isfinite(warp_multiplier[s]))
      throw ConfigError("contention.multiplier." + name + " must be >= 1");
    if (!(render_slowdown[s] >= 1.0) || !std::isfinite(render_slowdown[s]))
      throw ConfigError("contention.render_slowdown." + name + " must be >= 1");
    if (!finite_nonneg(backlog_cap_ms[s])) throw ConfigError("contention.backlog_cap_ms." + name + " must be >= 0");
    if (!finite_nonneg(backlog_ramp[s])) throw ConfigError("contention.backlog_ramp." + name + " must be >= 0");
    double row = 0.0;
    for (double p : transition[s]) {
      if (!finite_nonneg(p) || p > 1.0) throw ConfigError("contention.transition." + name + " has a bad probability");
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-9) throw ConfigError("contention.transition." + name + " does not sum to 1");
  }
}

void AtwCostModel::validate() const {
  warp.validate();
  contention.validate();
  if (!std::isfinite(preempt_alpha) || preempt_alpha < 0.0) throw ConfigError("atw.preempt_alpha must be >= 0");
  if (!std::isfinite(preempt_beta_ms) || preempt_beta_ms < 0.0) throw ConfigError("atw.preempt_beta_ms must be >= 0");
}

double atw_latency_ms(const PreemptionContext& ctx, const GpuModel& gpu, const AtwCostModel& cost, SharingMode mode) {
  const double kernel = warp_kernel_cost_ms(atw_cores(mode, gpu), cost.warp) / gpu.clock_ghz;
  if (mode != SharingMode::Shared) return kernel;

  const auto s = static_cast<std::size_t>(ctx.state);
  const auto& c = cost.contention;
  double remainder;
  if (ctx.drawcall_remaining_ms) {
    remainder = *ctx.drawcall_remaining_ms;
  } else {
    remainder = std::min(c.backlog_cap_ms[s], c.backlog_ramp[s] * std::max(0.0, ctx.ms_since_render_idle));
  }
  return cost.preempt_beta_ms + cost.preempt_alpha * remainder + c.warp_multiplier[s] * kernel;
}

void SimParams::validate() const {
  if (!(refresh_period_ms > 0.0) || !std::isfinite(refresh_period_ms))
    throw ConfigError("sim.refresh_period_ms must be positive");
  if (!(baseline_lead_ms >= 0.0) || baseline_lead_ms >= refresh_period_ms)
    throw ConfigError("sim.baseline_lead_ms must lie in [0, refresh period)");
}

}  // namespace predatw
