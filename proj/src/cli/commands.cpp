#include "predatw/commands.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <type_traits>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"
#include "predatw/pipeline.hpp"
#include "predatw/rng.hpp"
#include "predatw/timewarp.hpp"

namespace predatw {

RunConfig resolve_config(const GlobalOptions& g) {
  RunConfig cfg = g.config ? load_config(*g.config) : RunConfig{};
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.out_dir = *g.out;
  cfg.validate();
  return cfg;
}

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

}  // namespace

int cmd_generate(const RunConfig& cfg, const std::filesystem::path& trace_out, std::ostream& log) {
  const auto jobs = generate(cfg.workload);
  save_trace(jobs_to_trace(jobs), trace_out);
  log << "wrote " << jobs.size() << " frames to " << trace_out.string() << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt, std::ostream& log) {
  const auto jobs = opt.trace ? ingest_csv(*opt.trace) : generate(cfg.workload);
  Policy policy;
  if (opt.policy == "baseline") {
    policy = BaselinePolicy{};
  } else if (opt.policy == "eager") {
    policy = EagerPolicy{};
  } else if (opt.policy == "predatw") {
    if (!opt.model) throw ConfigError("policy predatw needs --model");
    policy = PredAtwPolicy{std::make_shared<ModelPredictor>(load_model(*opt.model)), cfg.safety_margin_ms};
  } else {
    throw ConfigError("unknown policy '" + opt.policy + "'");
  }
  SessionOptions so;
  so.mode = opt.mode;
  so.seed = cfg.seed;
  const auto r = run_session(jobs, policy, cfg.gpu, cfg.cost, cfg.sim, so);

  std::filesystem::create_directories(cfg.out_dir);
  {
    auto f = open_out(cfg.out_dir / "timeline.csv");
    write_timeline_csv(r.timeline, f);
  }
  {
    auto f = open_out(cfg.out_dir / "report.csv");
    write_reports_csv({r.report}, f);
  }
  save_trace(r.trace, cfg.out_dir / "trace.csv");
  log << r.report.policy << ' ' << r.report.mode << ": miss " << format_double(r.report.miss_rate_percent)
      << "%, mean gap " << format_double(r.report.mean_gap_ms) << " ms over " << r.report.n_intervals << " intervals\n";
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::filesystem::path& trace, const std::string& kind,
              const std::filesystem::path& model_out, std::ostream& log) {
  const auto data = to_labeled(load_trace(trace));
  RegressionModel model;
  if (kind == "tree") model = fit_tree(data, cfg.tree);
  else if (kind == "linear") model = fit_linear(data);
  else if (kind == "forest") model = fit_forest(data, cfg.forest, derive_seed(cfg.seed, 21));
  else if (kind == "boosted") model = fit_boosted(data, cfg.boost);
  else throw ConfigError("unknown model type '" + kind + "'");
  if (model_out.has_parent_path()) std::filesystem::create_directories(model_out.parent_path());
  save_model(model, model_out);
  log << "trained " << kind << " on " << data.size() << " samples -> " << model_out.string() << '\n';
  return kExitOk;
}

int cmd_evaluate(const std::filesystem::path& trace, const std::filesystem::path& model, std::ostream& log) {
  const auto r = evaluate_mae(load_model(model), to_labeled(load_trace(trace)));
  log << "mae_ms," << format_double(r.mae_ms) << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& log) {
  const auto train_jobs = session_jobs(cfg, SessionRole::Train);
  const auto tree = fit_tree(
      to_labeled(baseline_labels(train_jobs, cfg, SharingMode::Shared, session_seed(cfg, SessionRole::Train))), cfg.tree);
  const auto reports = run_compare(cfg, train_jobs, tree);
  write_policy_outputs(reports, cfg.out_dir);
  write_reports_csv(reports, log);
  return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& log) {
  const auto r = run_reproduce(cfg);
  write_reproduce_outputs(r, cfg.out_dir);
  for (const auto& m : r.mae) log << "mae " << m.model << ' ' << format_double(m.mae_ms) << " ms\n";
  write_reports_csv(r.reports, log);
  for (const auto& f : r.failures) log << "assertion failed: " << f << '\n';
  return r.failures.empty() ? kExitOk : kExitAssertion;
}

int cmd_warp(const WarpOptions& opt, std::ostream& log) {
  const auto& r = opt.render_ypr;
  const auto& d = opt.display_ypr;
  ProjectionModel proj;
  proj.hfov_deg = opt.hfov_deg;
  proj.vfov_deg = opt.hfov_deg;
  FrameImage in = read_ppm(opt.in, proj);
  in = FrameImage(in.width(), in.height(), ProjectionModel::square_pixels(opt.hfov_deg, in.width(), in.height()),
                  std::vector<std::uint8_t>(in.rgb().begin(), in.rgb().end()));
  WarpConfig wc;
  wc.sampling = opt.nearest ? Sampling::Nearest : Sampling::Bilinear;
  const auto out = timewarp(in, pose_from_euler(r[0], r[1], r[2], 0.0), pose_from_euler(d[0], d[1], d[2], 0.0), wc);
  write_ppm(out, opt.out);
  log << "warped " << opt.in.string() << " -> " << opt.out.string() << '\n';
  return kExitOk;
}

int cmd_similarity(const std::filesystem::path& a, const std::filesystem::path& b, double hfov_deg,
                   const SimilarityConfig& cfg, std::ostream& log) {
  ProjectionModel proj;
  proj.hfov_deg = hfov_deg;
  proj.vfov_deg = hfov_deg;
  const auto rep = macroblock_similarity(read_ppm(a, proj), read_ppm(b, proj), cfg);
  log << "macroblocks," << rep.n_macroblocks << "\nsimilar," << rep.n_similar << "\npercent,"
      << format_double(rep.percent) << "\nframes_similar," << (frames_similar(rep, cfg) ? "true" : "false") << '\n';
  return kExitOk;
}

namespace {

int max_path(const RegressionModel& model, const FeatureRow& x) {
  return std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          return m.path_length(x);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          int p = 0;
          for (const auto& t : m.trees) p = std::max(p, t.path_length(x));
          return p;
        } else if constexpr (std::is_same_v<T, BoostedModel>) {
          int p = 0;
          for (const auto& s : m.stages) p = std::max(p, s.tree.path_length(x));
          return p;
        } else {
          return 0;
        }
      },
      model);
}

}  // namespace

BenchResult bench_predict(const RegressionModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("bench-predict needs n >= 1");
  Rng rng(seed);
  std::vector<FeatureRow> rows(n);
  for (auto& r : rows) {
    r = {rng.uniform(0.5, 12.0), std::floor(rng.uniform(1e6, 1e7)), rng.uniform(2.0, 16.0), std::floor(rng.uniform(1e6, 4e6)),
         rng.uniform(0.0, 255.0), std::floor(rng.uniform(1e6, 4e6)), std::floor(rng.uniform(2e5, 2e6)),
         std::floor(rng.uniform(50.0, 800.0))};
  }
  using clock = std::chrono::steady_clock;
  BenchResult res;
  res.n = n;
  volatile double sink = 0.0;
  double max_ns = 0.0;
  for (const auto& r : rows) {
    const auto t0 = clock::now();
    sink = sink + predict(model, r);
    const auto t1 = clock::now();
    max_ns = std::max(max_ns, static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    res.max_path_length = std::max(res.max_path_length, max_path(model, r));
  }
  const auto t0 = clock::now();
  for (const auto& r : rows) sink = sink + predict(model, r);
  const auto t1 = clock::now();
  res.mean_us = static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()) / 1e3 /
                static_cast<double>(n);
  res.max_us = max_ns / 1e3;
  return res;
}

int cmd_bench_predict(const std::filesystem::path& model, std::size_t n, std::uint64_t seed, std::ostream& log) {
  const auto m = load_model(model);
  const auto r = bench_predict(m, n, seed);
  log << "model," << model_kind(m) << "\nn," << r.n << "\nmean_us," << format_double(r.mean_us) << "\nmax_us,"
      << format_double(r.max_us) << "\nmax_path_length," << r.max_path_length << '\n';
  return kExitOk;
}

}  // namespace predatw
