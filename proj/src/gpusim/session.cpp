#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "predatw/error.hpp"
#include "predatw/gpusim.hpp"
#include "predatw/rng.hpp"

namespace predatw {

namespace {

// Wall-clock execution of one draw call.
struct Segment {
  Nanos start;
  Nanos end;
};

// Render progress. A draw call's wall duration is fixed when it starts (work
// times the interval's slowdown); an ATW preemption shifts its end.
inline constexpr Nanos kIdle = -1;

struct RenderCursor {
  std::size_t job = 0;
  std::size_t call = 0;
  Nanos call_end = kIdle;  // end of the in-flight draw call, kIdle when none
  bool busy() const { return call_end != kIdle; }
  Nanos idle_since = 0;  // last time the render went idle
  bool ever_ran = false;
};

struct JobTiming {
  std::optional<Nanos> start;
  std::optional<Nanos> end;
};

class Simulator {
 public:
  Simulator(const std::vector<FrameJob>& jobs, const GpuModel& gpu, const AtwCostModel& cost,
            const SimParams& params, SharingMode mode)
      : jobs_(jobs), gpu_(gpu), cost_(cost), params_(params), mode_(mode),
        period_(ms_to_ns(params.refresh_period_ms)), timing_(jobs.size()) {
    work_.reserve(jobs.size());
    for (const auto& j : jobs) {
      std::vector<Nanos> w;
      w.reserve(j.draw_call_profile.size());
      for (double q : j.draw_call_profile) w.push_back(std::max<Nanos>(1, ms_to_ns(q)));
      work_.push_back(std::move(w));
    }
  }

  Nanos release(std::size_t j) const { return static_cast<Nanos>(j) * period_; }

  // Runs the render from `from` up to `to` with jobs <= last eligible. Records
  // draw-call segments when `segs` is given and job timings when `log` is set.
  void advance(RenderCursor& c, Nanos from, Nanos to, std::size_t last, double factor, std::vector<Segment>* segs,
               bool log) {
    Nanos t = from;
    for (;;) {
      if (c.busy()) {
        if (c.call_end > to) return;
        t = c.call_end;
        c.call_end = kIdle;
        c.idle_since = t;
        if (++c.call == work_[c.job].size()) {
          if (log) timing_[c.job].end = t;
          ++c.job;
          c.call = 0;
        }
        continue;
      }
      if (c.job >= jobs_.size() || c.job > last) return;
      const Nanos start = std::max(t, release(c.job));
      if (start > to) return;
      if (c.call == 0 && log) {
        timing_[c.job].start = start;
        events_.push_back({start, EventKind::RenderStart, jobs_[c.job].frame_id});
      }
      const auto wall = std::max<Nanos>(1, std::llround(static_cast<double>(work_[c.job][c.call]) * factor));
      c.call_end = start + wall;
      c.ever_ran = true;
      if (segs) segs->push_back({start, start + wall});
      t = start;
    }
  }

  double render_factor(Contention s) const {
    if (mode_ == SharingMode::Shared)
      return 2.0 * cost_.contention.render_slowdown[static_cast<std::size_t>(s)];
    const unsigned atw = atw_cores(mode_, gpu_);
    const unsigned rest = gpu_.n_sms > atw ? gpu_.n_sms - atw : 1;
    return static_cast<double>(gpu_.n_sms) / static_cast<double>(rest);
  }

  Nanos latency_ns(const PreemptionContext& p) const {
    return std::max<Nanos>(1, ms_to_ns(atw_latency_ms(p, gpu_, cost_, mode_)));
  }

  SessionResult run(const Policy& policy, const std::vector<Contention>& states) {
    SessionResult out;
    out.intervals.reserve(jobs_.size());
    out.trace.records.reserve(jobs_.size());
    events_.reserve(jobs_.size() * 6);

    RenderCursor cursor;
    Nanos gpu_clock = 0;        // render simulated up to here
    Nanos prev_atw_end = 0;
    double prev_latency = kSeedPrevAtwLatMs;
    std::optional<std::size_t> last_done;  // most recent fully rendered job

    for (std::size_t k = 0; k < jobs_.size(); ++k) {
      const Contention state = states[k];
      const double factor = render_factor(state);
      const Nanos start_k = release(k);
      const Nanos deadline = start_k + period_;
      const Nanos watch = deadline - ms_to_ns(params_.baseline_lead_ms);

      // Render without ATW interference until the deadline: gives render end
      // and the exact latency function for this interval.
      RenderCursor proj = cursor;
      std::vector<Segment> segs;
      const Nanos horizon = std::max({deadline, gpu_clock, prev_atw_end}) + period_;
      advance(proj, std::max(gpu_clock, start_k), horizon, k, factor, &segs, false);
      std::optional<Nanos> render_end;
      if (proj.job > k) {
        // Later jobs are not eligible, so job k's last draw call is the last segment.
        render_end = cursor.job > k ? timing_[k].end
                                    : std::optional<Nanos>(segs.empty() ? cursor.call_end : segs.back().end);
      }
      const Nanos idle_before = cursor.idle_since;
      const bool in_flight_before = cursor.busy();
      const Nanos in_flight_end_before = (cursor.busy() ? cursor.call_end : 0);

      auto context_at = [&, state](Nanos t) {
        PreemptionContext p;
        p.state = state;
        if (in_flight_before && t < in_flight_end_before) {
          p.drawcall_remaining_ms = ns_to_ms(in_flight_end_before - t);
          return p;
        }
        Nanos idle = in_flight_before ? in_flight_end_before : idle_before;
        auto it = std::upper_bound(segs.begin(), segs.end(), t, [](Nanos v, const Segment& s) { return v < s.start; });
        if (it != segs.begin()) {
          const Segment& s = *std::prev(it);
          if (t < s.end) {
            p.drawcall_remaining_ms = ns_to_ms(s.end - t);
            return p;
          }
          idle = std::max(idle, s.end);
        }
        p.ms_since_render_idle = ns_to_ms(t - idle);
        return p;
      };

      const Nanos earliest = std::min(render_end.value_or(watch), watch);
      DecisionContext ctx;
      ctx.interval_start = start_k;
      ctx.deadline = deadline;
      ctx.now = std::max(earliest, prev_atw_end);
      ctx.render_end = render_end;
      std::optional<Nanos> own_render;
      if (render_end && *render_end <= ctx.now) own_render = *render_end - start_k;
      ctx.features = interval_features(k, prev_latency, ctx.now, own_render);
      ctx.latency_at = [&](Nanos t) { return latency_ns(context_at(t)); };

      const Nanos t_inv = std::max(decide_invoke_time(policy, ctx, params_), ctx.now);

      // Real render up to the invocation.
      advance(cursor, std::max(gpu_clock, start_k), std::max(t_inv, gpu_clock), k, factor, nullptr, true);
      gpu_clock = std::max(gpu_clock, t_inv);

      const PreemptionContext pc = context_at(t_inv);
      const Nanos lat = latency_ns(pc);
      const Nanos atw_end = t_inv + lat;

      IntervalRecord rec;
      rec.frame_id = jobs_[k].frame_id;
      rec.state = state;
      rec.interval_start = start_k;
      rec.deadline = deadline;
      rec.render_end = render_end && *render_end <= deadline ? render_end : std::nullopt;
      rec.atw_start = t_inv;
      rec.atw_end = atw_end;
      rec.latency_ms = ns_to_ms(lat);
      rec.missed = atw_end > deadline;
      for (std::size_t j = cursor.job; j-- > 0;) {
        if (timing_[j].end && *timing_[j].end <= t_inv) {
          rec.warped_frame = jobs_[j].frame_id;
          break;
        }
      }

      const bool preempt = mode_ == SharingMode::Shared && cursor.busy();
      rec.preempted_render = preempt;
      if (preempt) events_.push_back({t_inv, EventKind::Preempt, rec.frame_id});
      events_.push_back({t_inv, EventKind::AtwStart, rec.frame_id});
      events_.push_back({atw_end, EventKind::AtwEnd, rec.frame_id});
      events_.push_back({deadline, EventKind::Refresh, rec.frame_id});
      if (rec.missed) {
        events_.push_back({deadline, EventKind::DeadlineMiss, rec.frame_id});
        if (params_.gap_includes_missed) {
          const Nanos next = (atw_end + period_ - 1) / period_ * period_;
          rec.gap_ms = ns_to_ms(next - atw_end);
        }
      } else {
        rec.gap_ms = ns_to_ms(deadline - atw_end);
      }

      if (mode_ == SharingMode::Shared) {
        // ATW holds the whole GPU: the in-flight draw call and the render wait.
        if (cursor.busy()) cursor.call_end += lat;
        gpu_clock = atw_end;
      }
      if (gpu_clock < deadline) {
        advance(cursor, gpu_clock, deadline, k, factor, nullptr, true);
        gpu_clock = deadline;
      }
      prev_atw_end = atw_end;

      out.trace.records.push_back({jobs_[k].frame_id, ctx.features, rec.latency_ms});
      prev_latency = rec.latency_ms;
      out.intervals.push_back(rec);
    }

    std::stable_sort(events_.begin(), events_.end(), [](const SimEvent& a, const SimEvent& b) { return a.t < b.t; });
    out.timeline.events = std::move(events_);
    out.timeline.refresh_period_ms = params_.refresh_period_ms;
    return out;
  }

 private:
  // L2Acc, Brightness and #Pixels describe the previous frame, #Threads,
  // #Vertices and #DrawCalls the current one. GPUTime is the last frame
  // completed at decision time (the frame about to be warped, so the current
  // one once its render has finished), measured from its submission at the
  // start of its interval to completion, as the application observes it.
  FeatureVector interval_features(std::size_t k, double prev_latency, Nanos now, std::optional<Nanos> own_render) const {
    FeatureVector fv = jobs_[k].features;
    const FeatureVector& prev = jobs_[k == 0 ? 0 : k - 1].features;
    fv.l2_acc = prev.l2_acc;
    fv.brightness = prev.brightness;
    fv.n_pixels = prev.n_pixels;
    fv.prev_atw_lat_ms = prev_latency;
    fv.gpu_time_ms = prev.gpu_time_ms;
    if (own_render) {
      fv.gpu_time_ms = ns_to_ms(*own_render);
      return fv;
    }
    for (std::size_t j = k; j-- > 0;) {
      if (timing_[j].end && *timing_[j].end <= now) {
        fv.gpu_time_ms = ns_to_ms(*timing_[j].end - release(j));
        break;
      }
    }
    return fv;
  }

  const std::vector<FrameJob>& jobs_;
  const GpuModel& gpu_;
  const AtwCostModel& cost_;
  const SimParams& params_;
  SharingMode mode_;
  Nanos period_;
  std::vector<std::vector<Nanos>> work_;
  std::vector<JobTiming> timing_;
  std::vector<SimEvent> events_;
};

PolicyReport summarize(const std::vector<IntervalRecord>& intervals, std::string policy, SharingMode mode) {
  PolicyReport r;
  r.policy = std::move(policy);
  r.mode = std::string(mode_name(mode));
  r.n_intervals = intervals.size();
  double gap_sum = 0.0, lat_sum = 0.0;
  std::size_t n_gap = 0;
  r.min_latency_ms = std::numeric_limits<double>::infinity();
  r.max_latency_ms = 0.0;
  r.gaps.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (iv.missed) ++r.n_missed;
    if (iv.gap_ms) {
      gap_sum += *iv.gap_ms;
      ++n_gap;
    }
    r.gaps.push_back(iv.gap_ms);
    lat_sum += iv.latency_ms;
    r.min_latency_ms = std::min(r.min_latency_ms, iv.latency_ms);
    r.max_latency_ms = std::max(r.max_latency_ms, iv.latency_ms);
  }
  if (intervals.empty()) r.min_latency_ms = 0.0;
  const double n = static_cast<double>(std::max<std::size_t>(1, intervals.size()));
  r.miss_rate_percent = 100.0 * static_cast<double>(r.n_missed) / n;
  r.mean_gap_ms = n_gap ? gap_sum / static_cast<double>(n_gap) : 0.0;
  r.mean_latency_ms = lat_sum / n;
  return r;
}

}  // namespace

std::vector<Contention> contention_trajectory(std::size_t n, const ContentionModel& model, std::uint64_t seed) {
  std::vector<Contention> states;
  states.reserve(n);
  Rng rng = Rng(seed).fork(0xC0A7);
  auto s = static_cast<std::size_t>(model.initial);
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const double u = rng.uniform();
      double acc = 0.0;
      std::size_t next = kContentionStates - 1;
      for (std::size_t j = 0; j < kContentionStates; ++j) {
        acc += model.transition[s][j];
        if (u < acc) {
          next = j;
          break;
        }
      }
      s = next;
    }
    states.push_back(static_cast<Contention>(s));
  }
  return states;
}

SessionResult run_session(const std::vector<FrameJob>& jobs, const Policy& policy, const GpuModel& gpu,
                          const AtwCostModel& cost, const SimParams& params, const SessionOptions& options) {
  if (jobs.empty()) throw std::invalid_argument("run_session needs at least one job");
  gpu.validate();
  cost.validate();
  params.validate();
  for (const auto& j : jobs) j.validate();

  std::vector<Contention> states;
  if (options.forced_states) {
    if (options.forced_states->size() != jobs.size())
      throw std::invalid_argument("forced contention states must match the job count");
    states = *options.forced_states;
  } else {
    states = contention_trajectory(jobs.size(), cost.contention, options.seed);
  }
  Simulator sim(jobs, gpu, cost, params, options.mode);
  SessionResult r = sim.run(policy, states);
  r.report = summarize(r.intervals, policy_name(policy), options.mode);
  return r;
}

std::vector<PolicyReport> compare_policies(
    const std::vector<FrameJob>& jobs, const GpuModel& gpu, const AtwCostModel& cost, const SimParams& params,
    std::uint64_t seed, const CompareSpec& spec,
    const std::function<std::shared_ptr<const LatencyPredictor>(SharingMode)>& predictors) {
  std::vector<PolicyReport> reports;
  for (const auto& name : spec.policies) {
    for (SharingMode mode : spec.modes) {
      Policy p;
      if (name == "baseline") {
        p = BaselinePolicy{};
      } else if (name == "eager") {
        p = EagerPolicy{};
      } else if (name == "predatw") {
        PredAtwPolicy pa;
        if (predictors) pa.predictor = predictors(mode);
        pa.safety_margin_ms = spec.safety_margin_ms;
        p = pa;
      } else {
        throw ConfigError("unknown policy '" + name + "'");
      }
      SessionOptions opt;
      opt.mode = mode;
      opt.seed = seed;
      reports.push_back(run_session(jobs, p, gpu, cost, params, opt).report);
    }
  }
  return reports;
}

}  // namespace predatw
