#include "predatw/pipeline.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <numeric>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"

namespace predatw {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t session_seed(const RunConfig& cfg, SessionRole role) {
  return derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(role));
}

std::vector<FrameJob> session_jobs(const RunConfig& cfg, SessionRole role) {
  WorkloadSpec spec = cfg.workload;
  spec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(role));
  switch (role) {
    case SessionRole::Train: spec.n_frames = cfg.train_frames; break;
    case SessionRole::Test: spec.n_frames = cfg.test_frames; break;
    case SessionRole::Compare: spec.n_frames = cfg.compare_frames; break;
  }
  return generate(spec);
}

TraceDataset baseline_labels(const std::vector<FrameJob>& jobs, const RunConfig& cfg, SharingMode mode,
                             std::uint64_t seed) {
  SessionOptions opt;
  opt.mode = mode;
  opt.seed = seed;
  return run_session(jobs, BaselinePolicy{}, cfg.gpu, cfg.cost, cfg.sim, opt).trace;
}

TrainedModels train_all(const LabeledSet& train, const RunConfig& cfg) {
  TrainedModels m;
  m.tree = fit_tree(train, cfg.tree);
  m.linear = fit_linear(train);
  m.forest = fit_forest(train, cfg.forest, derive_seed(cfg.seed, 21));
  m.boosted = fit_boosted(train, cfg.boost);
  return m;
}

std::vector<ModelScore> score_all(const TrainedModels& m, const LabeledSet& test) {
  return {
      {"tree", evaluate_mae(m.tree, test).mae_ms},
      {"linear", evaluate_mae(m.linear, test).mae_ms},
      {"forest", evaluate_mae(m.forest, test).mae_ms},
      {"boosted", evaluate_mae(m.boosted, test).mae_ms},
  };
}

std::vector<AblationRow> ablation_study(const LabeledSet& train, const LabeledSet& test, const TreeParams& params) {
  std::vector<AblationRow> rows;
  const double full = evaluate_mae(fit_tree(train, params), test).mae_ms;
  rows.push_back({"none", full, 0.0});
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    TreeParams p = params;
    p.use_feature[f] = false;
    const double mae = evaluate_mae(fit_tree(train, p), test).mae_ms;
    rows.push_back({std::string(feature_name(f)), mae, full > 0.0 ? 100.0 * (mae - full) / full : 0.0});
  }
  return rows;
}

namespace {

const PolicyReport* find_report(const std::vector<PolicyReport>& reports, std::string_view policy, std::string_view mode) {
  for (const auto& r : reports)
    if (r.policy == policy && r.mode == mode) return &r;
  return nullptr;
}

}  // namespace

std::vector<PolicyReport> run_compare(const RunConfig& cfg, const std::vector<FrameJob>& train_jobs,
                                      const DecisionTree& shared_tree) {
  std::map<SharingMode, std::shared_ptr<const LatencyPredictor>> predictors;
  for (SharingMode mode : cfg.modes) {
    if (mode == SharingMode::Shared) {
      predictors[mode] = std::make_shared<ModelPredictor>(shared_tree);
    } else {
      const auto labeled = to_labeled(baseline_labels(train_jobs, cfg, mode, session_seed(cfg, SessionRole::Train)));
      predictors[mode] = std::make_shared<ModelPredictor>(fit_tree(labeled, cfg.tree));
    }
  }
  CompareSpec spec;
  spec.policies = cfg.policies;
  spec.modes = cfg.modes;
  spec.safety_margin_ms = cfg.safety_margin_ms;
  const auto compare_jobs = session_jobs(cfg, SessionRole::Compare);
  return compare_policies(compare_jobs, cfg.gpu, cfg.cost, cfg.sim, session_seed(cfg, SessionRole::Compare), spec,
                          [&](SharingMode m) { return predictors.at(m); });
}

ReproduceResult run_reproduce(const RunConfig& cfg) {
  cfg.validate();
  ReproduceResult out;

  const auto train_jobs = session_jobs(cfg, SessionRole::Train);
  const auto test_jobs = session_jobs(cfg, SessionRole::Test);

  const auto train = to_labeled(baseline_labels(train_jobs, cfg, SharingMode::Shared, session_seed(cfg, SessionRole::Train)));
  const auto test = to_labeled(baseline_labels(test_jobs, cfg, SharingMode::Shared, session_seed(cfg, SessionRole::Test)));

  const TrainedModels models = train_all(train, cfg);
  out.mae = score_all(models, test);
  out.ablation = ablation_study(train, test, cfg.tree);
  for (const auto& pc : decision_path_counts(models.tree, test.x))
    for (std::size_t f = 0; f < kNumFeatures; ++f) out.path_totals[f] += pc[f];

  out.reports = run_compare(cfg, train_jobs, models.tree);

  // Assertions.
  const PolicyReport* eager = find_report(out.reports, "eager", "shared");
  if (eager && eager->n_missed != 0) out.failures.push_back("eager_never_misses");
  const PolicyReport* base = find_report(out.reports, "baseline", "shared");
  const PolicyReport* pred = find_report(out.reports, "predatw", "shared");
  if (base && pred && !(pred->miss_rate_percent < base->miss_rate_percent))
    out.failures.push_back("predatw_misses_less_than_baseline");
  if (!(out.mae[0].mae_ms < out.mae[1].mae_ms)) out.failures.push_back("tree_mae_below_linear");
  return out;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

void write_policy_outputs(const std::vector<PolicyReport>& reports, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto f = open_out(dir / "miss_rates.csv");
    write_reports_csv(reports, f);
  }
  auto f = open_out(dir / "gaps.csv");
  f << "policy,mode,frame_id,gap_ms\n";
  for (const auto& rep : reports)
    for (std::size_t i = 0; i < rep.gaps.size(); ++i)
      if (rep.gaps[i]) f << rep.policy << ',' << rep.mode << ',' << i << ',' << format_double(*rep.gaps[i]) << '\n';
}

void write_reproduce_outputs(const ReproduceResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto f = open_out(dir / "mae_by_model.csv");
    f << "model,mae_ms\n";
    for (const auto& m : r.mae) f << m.model << ',' << format_double(m.mae_ms) << '\n';
  }
  write_policy_outputs(r.reports, dir);
  {
    auto f = open_out(dir / "feature_importance.csv");
    f << "feature,path_count,share_percent\n";
    const double total = std::accumulate(r.path_totals.begin(), r.path_totals.end(), 0.0);
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      f << feature_name(i) << ',' << r.path_totals[i] << ','
        << format_double(total > 0 ? 100.0 * r.path_totals[i] / total : 0.0) << '\n';
  }
  {
    auto f = open_out(dir / "ablation.csv");
    f << "removed_feature,mae_ms,increase_percent\n";
    for (const auto& a : r.ablation) f << a.removed << ',' << format_double(a.mae_ms) << ',' << format_double(a.increase_percent) << '\n';
  }
  {
    auto f = open_out(dir / "atw_latency.csv");
    f << "policy,mode,mean_latency_ms,min_latency_ms,max_latency_ms\n";
    for (const auto& rep : r.reports)
      f << rep.policy << ',' << rep.mode << ',' << format_double(rep.mean_latency_ms) << ','
        << format_double(rep.min_latency_ms) << ',' << format_double(rep.max_latency_ms) << '\n';
  }
}

}  // namespace predatw
