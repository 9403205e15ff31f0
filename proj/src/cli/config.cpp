#include "predatw/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"

namespace predatw {

namespace {

struct Binding {
  std::string key;
  std::function<void(const std::string&)> set;
  std::function<std::string()> get;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

double to_real(const std::string& v) {
  double d;
  if (!parse_double(v, d)) throw std::invalid_argument("expected a number, got '" + v + "'");
  return d;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t u;
  if (!parse_u64(v, u)) throw std::invalid_argument("expected a non-negative integer, got '" + v + "'");
  return u;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

Binding real(std::string key, double& ref) {
  return {std::move(key), [&ref](const std::string& v) { ref = to_real(v); }, [&ref] { return format_double(ref); }};
}

template <class Int>
Binding integer(std::string key, Int& ref) {
  return {std::move(key), [&ref](const std::string& v) { ref = static_cast<Int>(to_u64(v)); },
          [&ref] { return std::to_string(ref); }};
}

Binding flag(std::string key, bool& ref) {
  return {std::move(key), [&ref](const std::string& v) { ref = to_bool(v); },
          [&ref] { return std::string(ref ? "true" : "false"); }};
}

constexpr const char* kStateKeys[] = {"low", "med", "high"};
constexpr const char* kChannelKeys[] = {"l2_acc", "threads", "brightness", "pixels", "vertices", "draw_calls", "shading"};

std::vector<Binding> bindings(RunConfig& c) {
  std::vector<Binding> b;
  b.push_back(integer("seed", c.seed));
  b.push_back({"out", [&c](const std::string& v) { c.out_dir = v; }, [&c] { return c.out_dir.string(); }});

  b.push_back(integer("gpu.n_sms", c.gpu.n_sms));
  b.push_back(real("gpu.clock_ghz", c.gpu.clock_ghz));

  b.push_back({"warp.calibration",
               [&c](const std::string& v) {
                 // "cores:ms, cores:ms, ..."
                 std::vector<CalibrationPoint> pts;
                 for (const auto& item : split_list(v)) {
                   const auto colon = item.find(':');
                   if (colon == std::string::npos) throw std::invalid_argument("expected cores:ms pairs");
                   pts.push_back({static_cast<double>(to_u64(trim(item.substr(0, colon)))),
                                  to_real(trim(item.substr(colon + 1)))});
                 }
                 c.cost.warp.points = std::move(pts);
               },
               [&c] {
                 std::vector<std::string> items;
                 for (const auto& p : c.cost.warp.points) items.push_back(format_double(p.cores) + ":" + format_double(p.ms));
                 return join(items);
               }});

  b.push_back(real("atw.preempt_alpha", c.cost.preempt_alpha));
  b.push_back(real("atw.preempt_beta_ms", c.cost.preempt_beta_ms));

  auto& ct = c.cost.contention;
  for (std::size_t s = 0; s < kContentionStates; ++s) {
    const std::string st = kStateKeys[s];
    b.push_back(real("contention.multiplier." + st, ct.warp_multiplier[s]));
    b.push_back(real("contention.render_slowdown." + st, ct.render_slowdown[s]));
    b.push_back(real("contention.backlog_cap_ms." + st, ct.backlog_cap_ms[s]));
    b.push_back(real("contention.backlog_ramp." + st, ct.backlog_ramp[s]));
    b.push_back({"contention.transition." + st,
                 [&ct, s](const std::string& v) {
                   const auto items = split_list(v);
                   if (items.size() != kContentionStates) throw std::invalid_argument("expected 3 probabilities");
                   for (std::size_t j = 0; j < kContentionStates; ++j) ct.transition[s][j] = to_real(items[j]);
                 },
                 [&ct, s] {
                   std::vector<std::string> items;
                   for (double p : ct.transition[s]) items.push_back(format_double(p));
                   return join(items);
                 }});
  }
  b.push_back({"contention.initial",
               [&ct](const std::string& v) {
                 for (std::size_t s = 0; s < kContentionStates; ++s)
                   if (v == kStateKeys[s]) return void(ct.initial = static_cast<Contention>(s));
                 throw std::invalid_argument("expected low, med or high");
               },
               [&ct] { return std::string(contention_name(ct.initial)); }});

  b.push_back(real("sim.refresh_period_ms", c.sim.refresh_period_ms));
  b.push_back(real("sim.baseline_lead_ms", c.sim.baseline_lead_ms));
  b.push_back(flag("sim.gap_includes_missed", c.sim.gap_includes_missed));
  b.push_back(integer("sim.train_frames", c.train_frames));
  b.push_back(integer("sim.test_frames", c.test_frames));
  b.push_back(integer("sim.compare_frames", c.compare_frames));

  b.push_back(real("policy.safety_margin_ms", c.safety_margin_ms));
  b.push_back({"policy.set", [&c](const std::string& v) { c.policies = split_list(v); }, [&c] { return join(c.policies); }});
  b.push_back({"policy.modes",
               [&c](const std::string& v) {
                 std::vector<SharingMode> m;
                 for (const auto& item : split_list(v)) m.push_back(parse_mode(item));
                 c.modes = std::move(m);
               },
               [&c] {
                 std::vector<std::string> items;
                 for (auto m : c.modes) items.emplace_back(mode_name(m));
                 return join(items);
               }});

  auto& w = c.workload;
  b.push_back(integer("workload.n_frames", w.n_frames));
  b.push_back(integer("workload.seed", w.seed));
  b.push_back(real("workload.render_mean_ms", w.render_mean_ms));
  b.push_back(real("workload.render_jitter", w.render_jitter));
  b.push_back(real("workload.render_min_ms", w.render_min_ms));
  b.push_back(real("workload.render_max_ms", w.render_max_ms));
  b.push_back({"workload.profile",
               [&w](const std::string& v) {
                 if (v == "steady") w.profile = ComplexityProfile::Steady;
                 else if (v == "scene-cut") w.profile = ComplexityProfile::SceneCut;
                 else throw std::invalid_argument("expected steady or scene-cut");
               },
               [&w] { return std::string(w.profile == ComplexityProfile::Steady ? "steady" : "scene-cut"); }});
  b.push_back(real("workload.scene_cut_rate", w.scene_cut_rate));
  b.push_back({"workload.autocorrelation",
               [&w](const std::string& v) { w.autocorrelation.fill(to_real(v)); },
               nullptr});  // shorthand for every channel; not echoed
  for (std::size_t ch = 0; ch < kChannels; ++ch) {
    const std::string name = kChannelKeys[ch];
    b.push_back(real("workload." + name + ".autocorrelation", w.autocorrelation[ch]));
    b.push_back(real("workload." + name + ".sigma", w.sigma[ch]));
    b.push_back(real("workload." + name + ".mean", w.mean[ch]));
  }

  b.push_back(integer("tree.max_depth", c.tree.max_depth));
  b.push_back(integer("tree.min_samples_leaf", c.tree.min_samples_leaf));
  b.push_back(integer("tree.min_samples_split", c.tree.min_samples_split));
  b.push_back(integer("forest.k", c.forest.k));
  b.push_back(flag("forest.bootstrap", c.forest.bootstrap));
  b.push_back(integer("boost.rounds", c.boost.rounds));
  b.push_back(real("boost.learning_rate", c.boost.learning_rate));

  b.push_back(real("similarity.tau", c.similarity.tau));
  b.push_back(real("similarity.frame_threshold_pct", c.similarity.frame_threshold_pct));
  return b;
}

}  // namespace

void RunConfig::validate() const {
  try {
    gpu.validate();
    cost.validate();
    sim.validate();
    workload.validate();
    tree.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (forest.k == 0) throw ConfigError("forest.k must be >= 1");
  if (boost.rounds == 0) throw ConfigError("boost.rounds must be >= 1");
  if (!(boost.learning_rate > 0.0 && boost.learning_rate <= 1.0)) throw ConfigError("boost.learning_rate must lie in (0, 1]");
  if (!(safety_margin_ms >= 0.0)) throw ConfigError("policy.safety_margin_ms must be >= 0");
  if (policies.empty()) throw ConfigError("policy.set is empty");
  for (const auto& p : policies)
    if (p != "baseline" && p != "eager" && p != "predatw") throw ConfigError("policy.set: unknown policy '" + p + "'");
  if (modes.empty()) throw ConfigError("policy.modes is empty");
  if (train_frames < 20) throw ConfigError("sim.train_frames must be >= 20");
  if (test_frames < 1) throw ConfigError("sim.test_frames must be >= 1");
  if (compare_frames < 1) throw ConfigError("sim.compare_frames must be >= 1");
  if (!(similarity.tau >= 0.0)) throw ConfigError("similarity.tau must be >= 0");
  if (!(similarity.frame_threshold_pct >= 0.0 && similarity.frame_threshold_pct <= 100.0))
    throw ConfigError("similarity.frame_threshold_pct must lie in [0, 100]");
}

void parse_config(std::istream& in, RunConfig& cfg) {
  auto table = bindings(cfg);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    auto it = std::find_if(table.begin(), table.end(), [&](const Binding& b) { return b.key == key; });
    if (it == table.end()) throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    try {
      it->set(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("line " + std::to_string(line) + ": bad value for '" + key + "': " + e.what());
    }
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  RunConfig cfg;
  parse_config(in, cfg);
  return cfg;
}

void write_config(const RunConfig& cfg, std::ostream& out) {
  RunConfig copy = cfg;
  for (const auto& b : bindings(copy))
    if (b.get) out << b.key << " = " << b.get() << '\n';
}

}  // namespace predatw
