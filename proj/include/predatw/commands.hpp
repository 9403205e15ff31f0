#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "predatw/config.hpp"

namespace predatw {

// Exit codes of every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

/// Defaults, then the config file, then --seed/--out; validated. Throws ConfigError.
RunConfig resolve_config(const GlobalOptions& g);

/// Writes an unlabeled trace of `cfg.workload` to `trace_out`.
int cmd_generate(const RunConfig& cfg, const std::filesystem::path& trace_out, std::ostream& log);

struct SimulateOptions {
  std::optional<std::filesystem::path> trace;  // jobs from a trace CSV instead of the workload spec
  std::string policy = "baseline";
  std::optional<std::filesystem::path> model;  // required for predatw
  SharingMode mode = SharingMode::Shared;
};
/// Writes timeline.csv, report.csv and the labeled trace.csv into cfg.out_dir.
int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt, std::ostream& log);

/// kind: tree | linear | forest | boosted.
int cmd_train(const RunConfig& cfg, const std::filesystem::path& trace, const std::string& kind,
              const std::filesystem::path& model_out, std::ostream& log);

/// Prints `mae_ms,<value>` for the model on a labeled trace.
int cmd_evaluate(const std::filesystem::path& trace, const std::filesystem::path& model, std::ostream& log);

/// Trains on a train session, then writes miss_rates.csv and gaps.csv for the compare session.
int cmd_compare(const RunConfig& cfg, std::ostream& log);

/// Full pipeline; exit 1 naming each failed assertion.
int cmd_reproduce(const RunConfig& cfg, std::ostream& log);

struct WarpOptions {
  std::filesystem::path in, out;
  std::array<double, 3> render_ypr{};   // yaw, pitch, roll in degrees
  std::array<double, 3> display_ypr{};
  double hfov_deg = 90.0;
  bool nearest = false;
};
int cmd_warp(const WarpOptions& opt, std::ostream& log);

int cmd_similarity(const std::filesystem::path& a, const std::filesystem::path& b, double hfov_deg,
                   const SimilarityConfig& cfg, std::ostream& log);

struct BenchResult {
  std::size_t n = 0;
  double mean_us = 0.0;
  double max_us = 0.0;
  int max_path_length = 0;
};
/// Times n predictions on seeded synthetic feature vectors. Throws on n == 0.
BenchResult bench_predict(const RegressionModel& model, std::size_t n, std::uint64_t seed);
int cmd_bench_predict(const std::filesystem::path& model, std::size_t n, std::uint64_t seed, std::ostream& log);

}  // namespace predatw
