#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "predatw/error.hpp"
#include "predatw/gpusim.hpp"
#include "predatw/workload.hpp"

using namespace predatw;

namespace {

FrameJob job(std::uint64_t id, double render_ms, std::size_t calls = 1) {
  FrameJob j;
  j.frame_id = id;
  j.render_time_ms = render_ms;
  j.features.gpu_time_ms = render_ms;
  j.features.prev_atw_lat_ms = 2.55;
  j.features.n_draw_calls = calls;
  j.draw_call_profile.assign(calls, render_ms / static_cast<double>(calls));
  return j;
}

class FixedPredictor final : public LatencyPredictor {
 public:
  explicit FixedPredictor(double ms) : ms_(ms) {}
  double predict_ms(const DecisionContext&) const override { return ms_; }

 private:
  double ms_;
};

std::vector<SimEvent> of_kind(const SimTimeline& tl, EventKind k) {
  std::vector<SimEvent> out;
  std::copy_if(tl.events.begin(), tl.events.end(), std::back_inserter(out), [k](const SimEvent& e) { return e.kind == k; });
  return out;
}

}  // namespace

TEST_CASE("ATW latency formula") {
  const GpuModel gpu;
  const AtwCostModel cost;
  PreemptionContext idle;
  CHECK(atw_latency_ms(idle, gpu, cost, SharingMode::Shared) == doctest::Approx(0.05 + 2.40));

  PreemptionContext busy{1.0, 0.0, Contention::Med};
  CHECK(atw_latency_ms(busy, gpu, cost, SharingMode::Shared) == doctest::Approx(0.05 + 1.0 + 1.3 * 2.40));
  CHECK(atw_latency_ms(busy, gpu, cost, SharingMode::SM3) == doctest::Approx(4.0));
  CHECK(atw_latency_ms(busy, gpu, cost, SharingMode::SM2) == doctest::Approx(9.39));
  CHECK(atw_latency_ms(busy, gpu, cost, SharingMode::SM1) == doctest::Approx(18.71));

  // The co-app backlog ramps with idle time up to its cap.
  PreemptionContext high{std::nullopt, 2.0, Contention::High};
  CHECK(atw_latency_ms(high, gpu, cost, SharingMode::Shared) == doctest::Approx(0.05 + 2.4 * 2.0 + 1.6 * 2.40));
  high.ms_since_render_idle = 100;
  CHECK(atw_latency_ms(high, gpu, cost, SharingMode::Shared) == doctest::Approx(0.05 + 16.0 + 1.6 * 2.40));

  GpuModel fast = gpu;
  fast.clock_ghz = 2.0;
  CHECK(atw_latency_ms(idle, fast, cost, SharingMode::Shared) == doctest::Approx(0.05 + 1.20));
  CHECK(atw_cores(SharingMode::SM1, gpu) == 2);
  CHECK(atw_cores(SharingMode::Shared, gpu) == 16);
}

TEST_CASE("decide_invoke_time") {
  const SimParams params;
  DecisionContext ctx;
  ctx.deadline = ms_to_ns(11.11);
  ctx.now = 0;
  CHECK(decide_invoke_time(BaselinePolicy{}, ctx, params) == ms_to_ns(8.56));

  ctx.now = ms_to_ns(6.0);
  ctx.render_end = ms_to_ns(6.0);
  CHECK(decide_invoke_time(EagerPolicy{}, ctx, params) == ms_to_ns(6.0));
  CHECK(decide_invoke_time(BaselinePolicy{}, ctx, params) == ms_to_ns(8.56));

  const PredAtwPolicy pred{std::make_shared<FixedPredictor>(3.0), 0.0};
  CHECK(decide_invoke_time(pred, ctx, params) == ms_to_ns(8.11));
  const PredAtwPolicy late{std::make_shared<FixedPredictor>(9.0), 0.5};
  CHECK(decide_invoke_time(late, ctx, params) == ms_to_ns(6.0));

  CHECK_THROWS_AS(decide_invoke_time(PredAtwPolicy{}, ctx, params), ConfigError);
  CHECK_THROWS_AS(decide_invoke_time(PredAtwPolicy{std::make_shared<FixedPredictor>(1.0), -1.0}, ctx, params),
                  ConfigError);
}

TEST_CASE("hand-traced eager interval") {
  AtwCostModel cost;
  cost.preempt_alpha = 0.0;
  cost.preempt_beta_ms = 0.05;
  SessionOptions opt;
  opt.forced_states = std::vector<Contention>{Contention::Low};

  // 3 ms of full-GPU work runs at half rate beside the co-running app: 6 ms wall.
  const auto r = run_session({job(0, 3.0)}, EagerPolicy{}, GpuModel{}, cost, SimParams{}, opt);
  REQUIRE(r.intervals.size() == 1);
  const auto& iv = r.intervals[0];
  CHECK(iv.render_end == ms_to_ns(6.0));
  CHECK(iv.atw_start == ms_to_ns(6.0));
  CHECK(iv.atw_end == ms_to_ns(8.45));
  REQUIRE(iv.gap_ms);
  CHECK(*iv.gap_ms == doctest::Approx(2.66).epsilon(1e-9));
  CHECK_FALSE(iv.missed);
  CHECK(r.report.n_missed == 0);

  const auto starts = of_kind(r.timeline, EventKind::AtwStart);
  REQUIRE(starts.size() == 1);
  CHECK(starts[0].t == ms_to_ns(6.0));
  CHECK(of_kind(r.timeline, EventKind::Refresh).at(0).t == ms_to_ns(11.11));
  CHECK(of_kind(r.timeline, EventKind::DeadlineMiss).empty());
  CHECK(of_kind(r.timeline, EventKind::Preempt).empty());
}

TEST_CASE("hand-traced baseline miss under high contention") {
  AtwCostModel cost;
  cost.preempt_alpha = 0.0;
  cost.preempt_beta_ms = 0.05;
  cost.contention.warp_multiplier[2] = 3.45 / 2.40;  // latency 3.5 ms
  SessionOptions opt;
  opt.forced_states = std::vector<Contention>{Contention::High};

  const auto r = run_session({job(0, 1.0)}, BaselinePolicy{}, GpuModel{}, cost, SimParams{}, opt);
  const auto& iv = r.intervals.at(0);
  CHECK(iv.atw_start == ms_to_ns(8.56));
  CHECK(ns_to_ms(iv.atw_end) == doctest::Approx(12.06).epsilon(1e-9));
  CHECK(iv.missed);
  CHECK_FALSE(iv.gap_ms);
  CHECK(r.report.n_missed == 1);
  CHECK(r.report.miss_rate_percent == 100.0);
  const auto miss = of_kind(r.timeline, EventKind::DeadlineMiss);
  REQUIRE(miss.size() == 1);
  CHECK(miss[0].t == ms_to_ns(11.11));

  SimParams with_missed;
  with_missed.gap_includes_missed = true;
  const auto r2 = run_session({job(0, 1.0)}, BaselinePolicy{}, GpuModel{}, cost, with_missed, opt);
  REQUIRE(r2.intervals[0].gap_ms);
  CHECK(*r2.intervals[0].gap_ms == doctest::Approx(22.22 - 12.06).epsilon(1e-9));
}

TEST_CASE("ATW preempts an in-flight draw call") {
  SessionOptions opt;
  opt.forced_states = std::vector<Contention>{Contention::Low};
  // One 6 ms call, 12 ms wall: still running at the 8.56 watch point.
  const auto r = run_session({job(0, 6.0)}, BaselinePolicy{}, GpuModel{}, AtwCostModel{}, SimParams{}, opt);
  const auto& iv = r.intervals.at(0);
  CHECK(iv.preempted_render);
  // Remaining 12 - 8.56 = 3.44 ms of the call plus beta and the warp.
  CHECK(iv.latency_ms == doctest::Approx(3.44 + 0.05 + 2.40).epsilon(1e-9));
  CHECK(of_kind(r.timeline, EventKind::Preempt).size() == 1);
  CHECK(iv.missed);
}

TEST_CASE("sessions on the synthetic workload") {
  WorkloadSpec spec;
  spec.n_frames = 600;
  spec.seed = 17;
  const auto jobs = generate(spec);
  SessionOptions opt;
  opt.seed = 9;

  const auto eager = run_session(jobs, EagerPolicy{}, GpuModel{}, AtwCostModel{}, SimParams{}, opt);
  CHECK(eager.report.n_missed == 0);

  const auto base = run_session(jobs, BaselinePolicy{}, GpuModel{}, AtwCostModel{}, SimParams{}, opt);
  const auto again = run_session(jobs, BaselinePolicy{}, GpuModel{}, AtwCostModel{}, SimParams{}, opt);
  CHECK(base.timeline.events == again.timeline.events);
  CHECK(base.trace == again.trace);
  CHECK(base.trace.is_chained(kSeedPrevAtwLatMs));
  CHECK(std::is_sorted(base.timeline.events.begin(), base.timeline.events.end(),
                       [](const SimEvent& a, const SimEvent& b) { return a.t < b.t; }));
  CHECK(of_kind(base.timeline, EventKind::Refresh).size() == jobs.size());

  PredAtwPolicy oracle{std::make_shared<OraclePredictor>(0.2), 0.2};
  const auto o = run_session(jobs, oracle, GpuModel{}, AtwCostModel{}, SimParams{}, opt);
  CHECK(o.report.n_missed == 0);
  for (const auto& g : o.report.gaps) {
    REQUIRE(g);
    CHECK(*g >= 0.2 - 1e-3);
  }

  double sm[3];
  int i = 0;
  for (auto m : {SharingMode::SM1, SharingMode::SM2, SharingMode::SM3}) {
    opt.mode = m;
    sm[i++] = run_session(jobs, BaselinePolicy{}, GpuModel{}, AtwCostModel{}, SimParams{}, opt).report.mean_latency_ms;
  }
  CHECK(sm[0] > sm[1]);
  CHECK(sm[1] > sm[2]);
}

TEST_CASE("contention trajectory") {
  const ContentionModel m;
  const auto a = contention_trajectory(5000, m, 4);
  CHECK(a == contention_trajectory(5000, m, 4));
  CHECK(a.front() == Contention::Low);
  std::size_t counts[3] = {};
  for (auto c : a) ++counts[static_cast<int>(c)];
  for (auto c : counts) CHECK(c > 0);

  ContentionModel bad = m;
  bad.transition[0] = {0.5, 0.2, 0.2};
  CHECK_THROWS(bad.validate());
}

TEST_CASE("compare_policies rejects unknown names") {
  const auto jobs = generate(WorkloadSpec{.n_frames = 20});
  CompareSpec spec;
  spec.policies = {"fastest"};
  CHECK_THROWS_AS(compare_policies(jobs, GpuModel{}, AtwCostModel{}, SimParams{}, 1, spec, nullptr), ConfigError);
}

TEST_CASE("csv writers") {
  SimTimeline tl;
  tl.events = {{ms_to_ns(8.56), EventKind::AtwStart, 0}, {ms_to_ns(11.11), EventKind::Refresh, 0}};
  std::ostringstream out;
  write_timeline_csv(tl, out);
  CHECK(out.str() == "t_ms,kind,frame_id\n8.56,AtwStart,0\n11.11,Refresh,0\n");

  PolicyReport r;
  r.policy = "eager";
  r.mode = "shared";
  std::ostringstream rep;
  write_reports_csv({r}, rep);
  CHECK(rep.str() == "policy,mode,miss_rate_percent,mean_gap_ms\neager,shared,0,0\n");
  CHECK(parse_mode("sm2") == SharingMode::SM2);
  CHECK_THROWS_AS(parse_mode("sm4"), ConfigError);
}
