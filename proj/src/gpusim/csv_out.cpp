#include <ostream>

#include "predatw/gpusim.hpp"
#include "predatw/numfmt.hpp"

namespace predatw {

std::string_view event_name(EventKind k) {
  switch (k) {
    case EventKind::RenderStart: return "RenderStart";
    case EventKind::Preempt: return "Preempt";
    case EventKind::AtwStart: return "AtwStart";
    case EventKind::AtwEnd: return "AtwEnd";
    case EventKind::Refresh: return "Refresh";
    case EventKind::DeadlineMiss: return "DeadlineMiss";
  }
  return "?";
}

void write_timeline_csv(const SimTimeline& tl, std::ostream& out) {
  out << "t_ms,kind,frame_id\n";
  for (const auto& e : tl.events) out << format_double(ns_to_ms(e.t)) << ',' << event_name(e.kind) << ',' << e.frame_id << '\n';
}

void write_reports_csv(const std::vector<PolicyReport>& reports, std::ostream& out) {
  out << "policy,mode,miss_rate_percent,mean_gap_ms\n";
  for (const auto& r : reports)
    out << r.policy << ',' << r.mode << ',' << format_double(r.miss_rate_percent) << ',' << format_double(r.mean_gap_ms)
        << '\n';
}

}  // namespace predatw
