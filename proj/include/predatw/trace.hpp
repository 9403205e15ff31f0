#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "predatw/features.hpp"

namespace predatw {

/// PrevATWLat of the first frame in a session: mean standalone warp-kernel latency.
inline constexpr double kSeedPrevAtwLatMs = 2.55;

inline constexpr std::string_view kTraceHeader =
    "frame_id,gpu_time_ms,l2_acc,prev_atw_lat_ms,n_threads,brightness,n_pixels,n_vertices,n_draw_calls,atw_lat_ms";

struct TraceRecord {
  std::uint64_t frame_id = 0;
  FeatureVector features;
  double atw_lat_ms = 0.0;

  bool operator==(const TraceRecord&) const = default;
};

/// Labeled frame trace; frame ids strictly increase.
struct TraceDataset {
  std::vector<TraceRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }

  /// True iff record i's PrevATWLat equals record i-1's label for every i >= 1
  /// and the first record carries `first_prev` (when given).
  bool is_chained() const;
  bool is_chained(double first_prev) const;

  bool operator==(const TraceDataset&) const = default;
};

/// Parse trace CSV. Errors (ParseError) name the offending line.
TraceDataset read_trace(std::istream& in);
TraceDataset load_trace(const std::filesystem::path& path);

void write_trace(const TraceDataset& dataset, std::ostream& out);
void save_trace(const TraceDataset& dataset, const std::filesystem::path& path);

}  // namespace predatw
