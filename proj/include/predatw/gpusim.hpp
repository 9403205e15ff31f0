#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "predatw/features.hpp"
#include "predatw/predictors.hpp"
#include "predatw/trace.hpp"
#include "predatw/warp_cost.hpp"

namespace predatw {

// ---------------------------------------------------------------------------
// Time. The simulator keeps integer nanoseconds; reports are in milliseconds.

using Nanos = std::int64_t;

inline Nanos ms_to_ns(double ms) { return static_cast<Nanos>(ms * 1e6 + (ms >= 0 ? 0.5 : -0.5)); }
inline double ns_to_ms(Nanos ns) { return static_cast<double>(ns) / 1e6; }

// ---------------------------------------------------------------------------
// Hardware and workload description.

struct GpuModel {
  unsigned n_sms = 16;  // 8 TPCs x 2 SMs
  double clock_ghz = 1.0;

  void validate() const;
};

/// Shared: ATW preempts rendering on the whole GPU while a co-running
/// application holds half the cores. SM1/SM2/SM3: 1/8, 1/4 or 1/2 of the SMs
/// are reserved for ATW, no co-app and no preemption.
enum class SharingMode { Shared, SM1, SM2, SM3 };

std::string_view mode_name(SharingMode m);  // "shared", "SM1", ...
SharingMode parse_mode(std::string_view s);  // case-insensitive; throws ConfigError
unsigned atw_cores(SharingMode m, const GpuModel& gpu);

struct FrameJob {
  std::uint64_t frame_id = 0;
  double render_time_ms = 0.0;  // with the full GPU
  FeatureVector features;       // this frame's own metrics, trace-CSV layout
  std::vector<double> draw_call_profile;  // work quanta in ms, summing to render_time_ms

  void validate() const;
};

/// Co-running application pressure, one state per refresh interval.
enum class Contention : std::uint8_t { Low = 0, Med = 1, High = 2 };
inline constexpr std::size_t kContentionStates = 3;

std::string_view contention_name(Contention c);

/// Seeded three-state Markov chain plus per-state effects.
///
///  - warp_multiplier scales the warp kernel (memory contention);
///  - render_slowdown scales VR render wall time on top of the 2x core split;
///  - once the VR render has finished, the co-app dispatches work onto the
///    released cores: its in-flight remainder grows at backlog_ramp ms per ms
///    up to backlog_cap_ms, and an ATW arriving later has to preempt it.
struct ContentionModel {
  std::array<double, kContentionStates> warp_multiplier = {1.0, 1.3, 1.6};
  std::array<double, kContentionStates> render_slowdown = {1.0, 1.2, 1.45};
  std::array<double, kContentionStates> backlog_cap_ms = {0.0, 8.0, 16.0};
  std::array<double, kContentionStates> backlog_ramp = {0.0, 0.8, 2.4};
  std::array<std::array<double, kContentionStates>, kContentionStates> transition = {{
      {0.97, 0.03, 0.00},
      {0.08, 0.87, 0.05},
      {0.00, 0.12, 0.88},
  }};
  Contention initial = Contention::Low;

  /// Multipliers >= 1, slowdowns >= 1, caps/ramps >= 0, rows summing to 1.
  void validate() const;
};

struct AtwCostModel {
  WarpCostModel warp;
  double preempt_alpha = 1.0;    // ms of ATW delay per ms of in-flight remainder
  double preempt_beta_ms = 0.05;  // fixed context-switch cost
  ContentionModel contention;

  void validate() const;
};

/// GPU situation at the instant ATW is requested.
struct PreemptionContext {
  std::optional<double> drawcall_remaining_ms;  // VR draw call in flight, if any
  double ms_since_render_idle = 0.0;            // otherwise: time since the VR render finished
  Contention state = Contention::Low;
};

/// In shared mode: beta + alpha · remainder + multiplier(state) · t(all SMs),
/// where remainder is the in-flight VR draw call or, when the render has
/// finished, the co-app backlog min(cap, ramp · idle time). In SM modes: the
/// kernel time on the reserved cores alone.
double atw_latency_ms(const PreemptionContext& ctx, const GpuModel& gpu, const AtwCostModel& cost, SharingMode mode);

// ---------------------------------------------------------------------------
// Invocation policies.

struct SimParams {
  double refresh_period_ms = 11.11;  // 90 Hz
  double baseline_lead_ms = 2.55;    // mean standalone warp-kernel latency
  bool gap_includes_missed = false;

  void validate() const;
};

/// What a policy sees when it decides; `latency_at` is the simulator's exact
/// latency function for this interval and is only consulted by the oracle.
struct DecisionContext {
  Nanos interval_start = 0;
  Nanos deadline = 0;
  Nanos now = 0;  // earliest admissible invocation (render end or watch point)
  std::optional<Nanos> render_end;
  FeatureVector features;
  std::function<Nanos(Nanos)> latency_at;
};

class LatencyPredictor {
 public:
  virtual ~LatencyPredictor() = default;
  virtual double predict_ms(const DecisionContext& ctx) const = 0;
};

/// Trained regression model on the interval's feature vector.
class ModelPredictor final : public LatencyPredictor {
 public:
  explicit ModelPredictor(RegressionModel model) : model_(std::move(model)) {}
  double predict_ms(const DecisionContext& ctx) const override { return predict(model_, ctx.features); }
  const RegressionModel& model() const noexcept { return model_; }

 private:
  RegressionModel model_;
};

/// Knows the future: returns the latency ATW will actually have when invoked
/// at the latest instant that still completes `margin_ms` before the deadline.
class OraclePredictor final : public LatencyPredictor {
 public:
  explicit OraclePredictor(double margin_ms) : margin_ms_(margin_ms) {}
  double predict_ms(const DecisionContext& ctx) const override;

 private:
  double margin_ms_;
};

struct BaselinePolicy {};
struct EagerPolicy {};
struct PredAtwPolicy {
  std::shared_ptr<const LatencyPredictor> predictor;
  double safety_margin_ms = 0.5;
};
using Policy = std::variant<BaselinePolicy, EagerPolicy, PredAtwPolicy>;

std::string policy_name(const Policy& p);  // "baseline", "eager", "predatw"

/// Baseline: deadline − lead. Eager: ctx.now (= min(render end, deadline − lead)).
/// PredATW: max(now, deadline − prediction − margin). Throws ConfigError for
/// PredATW without a predictor or with a negative margin.
Nanos decide_invoke_time(const Policy& policy, const DecisionContext& ctx, const SimParams& params);

// ---------------------------------------------------------------------------
// Sessions.

enum class EventKind { RenderStart, Preempt, AtwStart, AtwEnd, Refresh, DeadlineMiss };
std::string_view event_name(EventKind k);

struct SimEvent {
  Nanos t = 0;
  EventKind kind = EventKind::Refresh;
  std::uint64_t frame_id = 0;  // refresh interval (= job) the event belongs to

  bool operator==(const SimEvent&) const = default;
};

struct SimTimeline {
  std::vector<SimEvent> events;
  double refresh_period_ms = 11.11;
};

/// Per-interval detail, one entry per job.
struct IntervalRecord {
  std::uint64_t frame_id = 0;
  Contention state = Contention::Low;
  Nanos interval_start = 0;
  Nanos deadline = 0;
  std::optional<Nanos> render_end;  // this job's render completion, if before the deadline
  Nanos atw_start = 0;
  Nanos atw_end = 0;
  double latency_ms = 0.0;
  bool preempted_render = false;
  bool missed = false;
  std::optional<double> gap_ms;  // AtwEnd → next refresh; empty for misses unless gap_includes_missed
  std::optional<std::uint64_t> warped_frame;  // last fully rendered frame at AtwStart
};

struct PolicyReport {
  std::string policy;
  std::string mode;
  std::size_t n_intervals = 0;
  std::size_t n_missed = 0;
  double miss_rate_percent = 0.0;
  double mean_gap_ms = 0.0;       // over intervals that carry a gap
  double mean_latency_ms = 0.0;
  double min_latency_ms = 0.0;
  double max_latency_ms = 0.0;
  std::vector<std::optional<double>> gaps;
};

struct SessionResult {
  SimTimeline timeline;
  PolicyReport report;
  TraceDataset trace;  // predictor inputs and realized ATW latency per interval
  std::vector<IntervalRecord> intervals;
};

struct SessionOptions {
  SharingMode mode = SharingMode::Shared;
  std::uint64_t seed = 1;
  /// Overrides the Markov chain, one state per interval (tests).
  std::optional<std::vector<Contention>> forced_states;
};

/// Simulates one refresh interval per job. Deterministic in (jobs, policy, cost, options).
SessionResult run_session(const std::vector<FrameJob>& jobs, const Policy& policy, const GpuModel& gpu,
                          const AtwCostModel& cost, const SimParams& params, const SessionOptions& options);

/// Contention states the chain visits for these jobs and this seed.
std::vector<Contention> contention_trajectory(std::size_t n, const ContentionModel& model, std::uint64_t seed);

struct CompareSpec {
  std::vector<std::string> policies = {"baseline", "eager", "predatw"};
  std::vector<SharingMode> modes = {SharingMode::Shared, SharingMode::SM1, SharingMode::SM2, SharingMode::SM3};
  double safety_margin_ms = 0.5;
};

/// One PolicyReport per (policy, mode). `predictors` supplies the PredATW
/// predictor for each mode (required when "predatw" is requested).
std::vector<PolicyReport> compare_policies(
    const std::vector<FrameJob>& jobs, const GpuModel& gpu, const AtwCostModel& cost, const SimParams& params,
    std::uint64_t seed, const CompareSpec& spec,
    const std::function<std::shared_ptr<const LatencyPredictor>(SharingMode)>& predictors);

// CSV writers.
void write_timeline_csv(const SimTimeline& tl, std::ostream& out);                  // t_ms,kind,frame_id
void write_reports_csv(const std::vector<PolicyReport>& reports, std::ostream& out);  // policy,mode,miss_rate_percent,mean_gap_ms

}  // namespace predatw
