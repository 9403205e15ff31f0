#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "predatw/config.hpp"

namespace predatw {

/// Independent child seed for a named stream (splitmix64 of seed and stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

enum class SessionRole : std::uint64_t { Train = 1, Test = 2, Compare = 3 };

/// Workload of a session: disjoint seeds per role, so sessions never share frames.
std::vector<FrameJob> session_jobs(const RunConfig& cfg, SessionRole role);
std::uint64_t session_seed(const RunConfig& cfg, SessionRole role);

/// Trace labeled with the latencies the Baseline policy realizes in `mode`.
TraceDataset baseline_labels(const std::vector<FrameJob>& jobs, const RunConfig& cfg, SharingMode mode,
                             std::uint64_t seed);

struct TrainedModels {
  DecisionTree tree;
  LinearModel linear;
  ForestModel forest;
  BoostedModel boosted;
};

TrainedModels train_all(const LabeledSet& train, const RunConfig& cfg);

struct ModelScore {
  std::string model;
  double mae_ms = 0.0;
};
std::vector<ModelScore> score_all(const TrainedModels& m, const LabeledSet& test);

struct AblationRow {
  std::string removed;  // "none" or a feature name
  double mae_ms = 0.0;
  double increase_percent = 0.0;  // vs "none"
};
/// Decision tree retrained without each feature in turn.
std::vector<AblationRow> ablation_study(const LabeledSet& train, const LabeledSet& test, const TreeParams& params);

/// PredATW uses `shared_tree` in shared mode and a tree trained on the Baseline
/// train session of each SM mode otherwise; runs every configured policy x mode
/// on the compare session.
std::vector<PolicyReport> run_compare(const RunConfig& cfg, const std::vector<FrameJob>& train_jobs,
                                      const DecisionTree& shared_tree);

/// miss_rates.csv and gaps.csv.
void write_policy_outputs(const std::vector<PolicyReport>& reports, const std::filesystem::path& dir);

struct ReproduceResult {
  std::vector<ModelScore> mae;
  std::vector<PolicyReport> reports;
  std::vector<AblationRow> ablation;
  PathCounts path_totals{};  // decision-path feature frequency on the test session
  std::vector<std::string> failures;  // named assertions that did not hold
};

/// Train session -> models (and one PredATW tree per mode), test session ->
/// MAE and ablations, compare session -> policy table.
ReproduceResult run_reproduce(const RunConfig& cfg);

/// mae_by_model.csv, miss_rates.csv, gaps.csv, feature_importance.csv,
/// ablation.csv and atw_latency.csv.
void write_reproduce_outputs(const ReproduceResult& r, const std::filesystem::path& dir);

}  // namespace predatw
