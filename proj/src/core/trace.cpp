#include "predatw/trace.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"

namespace predatw {
namespace {

constexpr std::size_t kColumns = 10;
constexpr std::array<std::string_view, kColumns> kColumnNames = {
    "frame_id", "gpu_time_ms", "l2_acc", "prev_atw_lat_ms", "n_threads",
    "brightness", "n_pixels", "n_vertices", "n_draw_calls", "atw_lat_ms"};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

[[noreturn]] void fail(const std::string& what, std::size_t line) { throw ParseError(what, line); }

std::uint64_t cell_u64(std::string_view cell, std::size_t col, std::size_t line) {
  std::uint64_t v;
  if (!parse_u64(cell, v)) fail("column '" + std::string(kColumnNames[col]) + "': expected a non-negative integer, got '" + std::string(cell) + "'", line);
  return v;
}

double cell_real(std::string_view cell, std::size_t col, std::size_t line) {
  double v;
  if (!parse_double(cell, v)) fail("column '" + std::string(kColumnNames[col]) + "': expected a number, got '" + std::string(cell) + "'", line);
  if (v < 0.0) fail("column '" + std::string(kColumnNames[col]) + "': negative value", line);
  return v;
}

}  // namespace

bool TraceDataset::is_chained() const {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].features.prev_atw_lat_ms != records[i - 1].atw_lat_ms) return false;
  return true;
}

bool TraceDataset::is_chained(double first_prev) const {
  if (!records.empty() && records.front().features.prev_atw_lat_ms != first_prev) return false;
  return is_chained();
}

TraceDataset read_trace(std::istream& in) {
  TraceDataset ds;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) fail("missing header", 1);
  ++lineno;
  if (line != kTraceHeader) {
    const auto cells = split_commas(line);
    for (std::size_t c = 0; c < kColumns; ++c) {
      if (c >= cells.size() || cells[c] != kColumnNames[c])
        fail("header: missing or misplaced column '" + std::string(kColumnNames[c]) + "'", lineno);
    }
    fail("header: unexpected extra columns", lineno);
  }

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) fail("empty line", lineno);
    const auto cells = split_commas(line);
    if (cells.size() != kColumns)
      fail("expected " + std::to_string(kColumns) + " columns, got " + std::to_string(cells.size()), lineno);

    TraceRecord r;
    r.frame_id = cell_u64(cells[0], 0, lineno);
    r.features.gpu_time_ms = cell_real(cells[1], 1, lineno);
    r.features.l2_acc = cell_u64(cells[2], 2, lineno);
    r.features.prev_atw_lat_ms = cell_real(cells[3], 3, lineno);
    r.features.n_threads = cell_u64(cells[4], 4, lineno);
    r.features.brightness = cell_real(cells[5], 5, lineno);
    r.features.n_pixels = cell_u64(cells[6], 6, lineno);
    r.features.n_vertices = cell_u64(cells[7], 7, lineno);
    r.features.n_draw_calls = cell_u64(cells[8], 8, lineno);
    r.atw_lat_ms = cell_real(cells[9], 9, lineno);
    if (r.features.brightness > 255.0) fail("column 'brightness': outside [0, 255]", lineno);

    if (!ds.records.empty() && r.frame_id <= ds.records.back().frame_id)
      fail("frame_id " + std::to_string(r.frame_id) + " does not increase (previous " +
               std::to_string(ds.records.back().frame_id) + ")",
           lineno);
    ds.records.push_back(r);
  }
  return ds;
}

TraceDataset load_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_trace(in);
}

void write_trace(const TraceDataset& dataset, std::ostream& out) {
  out << kTraceHeader << '\n';
  for (const auto& r : dataset.records) {
    const auto& f = r.features;
    out << r.frame_id << ',' << format_double(f.gpu_time_ms) << ',' << f.l2_acc << ','
        << format_double(f.prev_atw_lat_ms) << ',' << f.n_threads << ',' << format_double(f.brightness) << ','
        << f.n_pixels << ',' << f.n_vertices << ',' << f.n_draw_calls << ',' << format_double(r.atw_lat_ms) << '\n';
  }
}

void save_trace(const TraceDataset& dataset, const std::filesystem::path& path) {
  std::ostringstream buf;
  write_trace(dataset, buf);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << buf.str();
}

}  // namespace predatw
