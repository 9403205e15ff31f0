#include <algorithm>
#include <cmath>
#include <type_traits>

#include "predatw/error.hpp"
#include "predatw/gpusim.hpp"

namespace predatw {

double OraclePredictor::predict_ms(const DecisionContext& ctx) const {
  if (!ctx.latency_at) throw ConfigError("oracle predictor needs the simulator's latency function");
  const Nanos target = ctx.deadline - ms_to_ns(margin_ms_);
  auto fits = [&](Nanos t) { return t + ctx.latency_at(t) <= target; };

  // Completion time is non-decreasing in the invoke time, so bisect for the
  // last instant that still fits. Nothing fits: ask for "now".
  Nanos lo = ctx.now;
  if (!fits(lo)) return ns_to_ms(ctx.latency_at(lo));
  Nanos hi = std::max(ctx.deadline, lo + 1);
  if (fits(hi)) return ns_to_ms(ctx.latency_at(hi));
  while (hi - lo > 1) {
    const Nanos mid = lo + (hi - lo) / 2;
    (fits(mid) ? lo : hi) = mid;
  }
  return ns_to_ms(ctx.latency_at(lo));
}

std::string policy_name(const Policy& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BaselinePolicy>) return "baseline";
        else if constexpr (std::is_same_v<T, EagerPolicy>) return "eager";
        else return "predatw";
      },
      p);
}

Nanos decide_invoke_time(const Policy& policy, const DecisionContext& ctx, const SimParams& params) {
  const Nanos watch = ctx.deadline - ms_to_ns(params.baseline_lead_ms);
  return std::visit(
      [&](const auto& v) -> Nanos {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BaselinePolicy>) {
          return std::max(watch, ctx.now);
        } else if constexpr (std::is_same_v<T, EagerPolicy>) {
          return ctx.now;
        } else {
          if (!v.predictor) throw ConfigError("PredATW policy has no trained model");
          if (!(v.safety_margin_ms >= 0.0) || !std::isfinite(v.safety_margin_ms))
            throw ConfigError("policy.safety_margin_ms must be >= 0");
          const double predicted = v.predictor->predict_ms(ctx);
          if (!std::isfinite(predicted)) return ctx.now;
          return std::max(ctx.now, ctx.deadline - ms_to_ns(predicted + v.safety_margin_ms));
        }
      },
      policy);
}

}  // namespace predatw
