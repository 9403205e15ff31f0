#include <CLI11.hpp>
#include <iostream>

#include "predatw/commands.hpp"
#include "predatw/error.hpp"

using namespace predatw;

namespace {

std::vector<SharingMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<SharingMode> out;
  for (const auto& n : names) out.push_back(parse_mode(n));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PredATW: predicted-latency ATW scheduling on a simulated GPU"};
  app.require_subcommand(1);

  GlobalOptions g;
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  auto* o_config = app.add_option("--config", config_path, "key = value config file");
  auto* o_seed = app.add_option("--seed", seed, "master seed");
  auto* o_out = app.add_option("--out", out_path, "output directory");

  std::string trace_out = "trace.csv";
  auto* gen = app.add_subcommand("generate", "write a synthetic unlabeled trace");
  gen->add_option("--trace,--spec-out,-o", trace_out, "trace CSV to write");
  std::string spec_path;
  gen->add_option("--spec", spec_path, "workload config (same format as --config)")->check(CLI::ExistingFile);

  SimulateOptions sim;
  std::string sim_trace, sim_model, sim_mode = "shared";
  auto* simc = app.add_subcommand("simulate", "run one policy and emit timeline, report and labeled trace");
  simc->add_option("--trace", sim_trace, "unlabeled or labeled trace CSV (default: generate from config)");
  simc->add_option("--policy", sim.policy, "baseline | eager | predatw");
  simc->add_option("--model", sim_model, "model file for predatw");
  simc->add_option("--mode", sim_mode, "shared | sm1 | sm2 | sm3");

  std::string tr_trace, tr_kind = "tree", tr_out = "model.txt";
  auto* train = app.add_subcommand("train", "fit a latency model on a labeled trace");
  train->add_option("--trace", tr_trace, "labeled trace CSV")->required();
  train->add_option("--model-type,--type", tr_kind, "tree | linear | forest | boosted");
  train->add_option("--model-out,-o", tr_out, "model file to write");

  std::string ev_trace, ev_model;
  auto* eval = app.add_subcommand("evaluate", "mean absolute error of a model on a labeled trace");
  eval->add_option("--trace", ev_trace)->required();
  eval->add_option("--model", ev_model)->required();

  std::vector<std::string> policies, modes;
  auto* cmp = app.add_subcommand("compare", "policy miss rates and gaps across sharing modes");
  cmp->add_option("--policies", policies)->delimiter(',');
  cmp->add_option("--modes", modes)->delimiter(',');
  auto* rep = app.add_subcommand("reproduce", "full pipeline with acceptance assertions");
  rep->add_option("--policies", policies)->delimiter(',');
  rep->add_option("--modes", modes)->delimiter(',');

  WarpOptions warp;
  std::vector<double> render_ypr{0, 0, 0}, display_ypr{0, 0, 0};
  auto* wc = app.add_subcommand("warp", "reproject a PPM frame to a new head pose");
  wc->add_option("--in", warp.in)->required();
  wc->add_option("--out-image,-o", warp.out)->required();
  wc->add_option("--render-pose", render_ypr, "yaw pitch roll in degrees")->expected(3);
  wc->add_option("--display-pose", display_ypr, "yaw pitch roll in degrees")->expected(3);
  wc->add_option("--hfov", warp.hfov_deg);
  wc->add_flag("--nearest", warp.nearest);

  std::string sim_a, sim_b;
  double sim_hfov = 90.0;
  auto* simi = app.add_subcommand("similarity", "DCT macroblock similarity of two PPM frames");
  simi->add_option("a", sim_a)->required();
  simi->add_option("b", sim_b)->required();
  simi->add_option("--hfov", sim_hfov);

  std::string bench_model;
  std::size_t bench_n = 100000;
  auto* bench = app.add_subcommand("bench-predict", "time model predictions on synthetic inputs");
  bench->add_option("--model", bench_model)->required();
  bench->add_option("-n,--n", bench_n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*o_config) g.config = config_path;
    if (*gen && !spec_path.empty()) g.config = spec_path;
    if (*o_seed) g.seed = seed;
    if (*o_out) g.out = out_path;
    RunConfig cfg = resolve_config(g);
    if (!policies.empty()) cfg.policies = policies;
    if (!modes.empty()) cfg.modes = parse_modes(modes);
    cfg.validate();

    if (*gen) return cmd_generate(cfg, trace_out, std::cout);
    if (*simc) {
      if (!sim_trace.empty()) sim.trace = sim_trace;
      if (!sim_model.empty()) sim.model = sim_model;
      sim.mode = parse_mode(sim_mode);
      return cmd_simulate(cfg, sim, std::cout);
    }
    if (*train) return cmd_train(cfg, tr_trace, tr_kind, tr_out, std::cout);
    if (*eval) return cmd_evaluate(ev_trace, ev_model, std::cout);
    if (*cmp) return cmd_compare(cfg, std::cout);
    if (*rep) return cmd_reproduce(cfg, std::cout);
    if (*wc) {
      std::copy(render_ypr.begin(), render_ypr.end(), warp.render_ypr.begin());
      std::copy(display_ypr.begin(), display_ypr.end(), warp.display_ypr.begin());
      return cmd_warp(warp, std::cout);
    }
    if (*simi) return cmd_similarity(sim_a, sim_b, sim_hfov, cfg.similarity, std::cout);
    if (*bench) return cmd_bench_predict(bench_model, bench_n, cfg.seed, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
