#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "predatw/gpusim.hpp"
#include "predatw/predictors.hpp"
#include "predatw/similarity.hpp"
#include "predatw/workload.hpp"

namespace predatw {

/// Everything a run needs. Defaults are the reference configuration.
struct RunConfig {
  GpuModel gpu;
  AtwCostModel cost;
  SimParams sim;
  WorkloadSpec workload;
  TreeParams tree;
  ForestParams forest;
  BoostParams boost;
  SimilarityConfig similarity;

  double safety_margin_ms = 0.5;
  std::vector<std::string> policies = {"baseline", "eager", "predatw"};
  std::vector<SharingMode> modes = {SharingMode::Shared, SharingMode::SM1, SharingMode::SM2, SharingMode::SM3};

  // Session sizes for `reproduce`: models train on one session, MAE is
  // measured on a second and the policy table on a third.
  std::size_t train_frames = 4000;
  std::size_t test_frames = 1000;
  std::size_t compare_frames = 5000;

  std::uint64_t seed = 42;
  std::filesystem::path out_dir = "out";

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

/// Applies `key = value` lines ('#' starts a comment) on top of `cfg`.
/// Unknown keys and malformed values throw ConfigError naming the key and line.
void parse_config(std::istream& in, RunConfig& cfg);
RunConfig load_config(const std::filesystem::path& path);

/// Every recognised key with its current value, one per line, parseable by parse_config.
void write_config(const RunConfig& cfg, std::ostream& out);

}  // namespace predatw
