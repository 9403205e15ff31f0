#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "predatw/error.hpp"
#include "predatw/numfmt.hpp"
#include "predatw/predictors.hpp"

namespace predatw {
namespace {

constexpr std::string_view kMagic = "predatw-model 1";

void write_tree(const DecisionTree& t, std::ostream& out) {
  const auto& p = t.params();
  std::string mask;
  for (bool b : p.use_feature) mask.push_back(b ? '1' : '0');
  out << "tree " << t.nodes().size() << ' ' << p.max_depth << ' ' << p.min_samples_leaf << ' '
      << p.min_samples_split << ' ' << mask << '\n';
  // Storage order is already pre-order.
  for (const auto& n : t.nodes()) {
    if (n.is_leaf())
      out << "leaf " << format_double(n.value) << ' ' << n.n_samples << '\n';
    else
      out << "split " << n.feature << ' ' << format_double(n.threshold) << ' ' << format_double(n.value) << ' '
          << n.n_samples << '\n';
  }
}

class LineReader {
 public:
  LineReader(std::istream& in, std::size_t lines_consumed) : in_(in), line_(lines_consumed) {}

  std::vector<std::string> next() {
    if (pending_) {
      auto t = std::move(*pending_);
      pending_.reset();
      return t;
    }
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of model file", line_ + 1);
    ++line_;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.empty()) throw ParseError("blank line in model file", line_);
    return tokens;
  }

  std::vector<std::string> expect(std::string_view keyword, std::size_t n_args) {
    auto t = next();
    if (t[0] != keyword || t.size() != n_args + 1)
      throw ParseError("expected '" + std::string(keyword) + "' with " + std::to_string(n_args) + " fields", line_);
    return t;
  }

  double real(const std::string& s) const {
    double v;
    if (!parse_double(s, v)) throw ParseError("bad number '" + s + "'", line_);
    return v;
  }

  std::uint64_t count(const std::string& s) const {
    std::uint64_t v;
    if (!parse_u64(s, v)) throw ParseError("bad count '" + s + "'", line_);
    return v;
  }

  void unread(std::vector<std::string> tokens) { pending_ = std::move(tokens); }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_;
  std::optional<std::vector<std::string>> pending_;
};

DecisionTree read_tree(LineReader& r) {
  const auto head = r.expect("tree", 5);
  const std::size_t n_nodes = r.count(head[1]);
  TreeParams p;
  p.max_depth = static_cast<int>(r.count(head[2]));
  p.min_samples_leaf = r.count(head[3]);
  p.min_samples_split = r.count(head[4]);
  if (head[5].size() != kNumFeatures) throw ParseError("feature mask must have 8 digits", r.line());
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    if (head[5][i] != '0' && head[5][i] != '1') throw ParseError("feature mask must be 0/1", r.line());
    p.use_feature[i] = head[5][i] == '1';
  }
  if (n_nodes == 0) throw ParseError("tree with no nodes", r.line());

  std::vector<TreeNode> nodes(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    auto t = r.next();
    if (t[0] == "leaf" && t.size() == 3) {
      nodes[i].value = r.real(t[1]);
      nodes[i].n_samples = r.count(t[2]);
    } else if (t[0] == "split" && t.size() == 5) {
      const auto f = r.count(t[1]);
      if (f >= kNumFeatures) throw ParseError("feature index out of range", r.line());
      nodes[i].feature = static_cast<int>(f);
      nodes[i].threshold = r.real(t[2]);
      nodes[i].value = r.real(t[3]);
      nodes[i].n_samples = r.count(t[4]);
    } else {
      throw ParseError("expected 'leaf' or 'split' node", r.line());
    }
  }

  // Rebuild child links from pre-order: left child follows its parent,
  // right child follows the whole left subtree.
  std::size_t cursor = 0;
  auto link = [&](auto&& self) -> int {
    if (cursor >= n_nodes) throw ParseError("truncated pre-order tree", r.line());
    const int me = static_cast<int>(cursor++);
    if (!nodes[me].is_leaf()) {
      nodes[me].left = self(self);
      nodes[me].right = self(self);
    }
    return me;
  };
  link(link);
  if (cursor != n_nodes) throw ParseError("trailing nodes after complete tree", r.line());
  return DecisionTree(std::move(nodes), p);
}

}  // namespace

void write_model(const RegressionModel& model, std::ostream& out) {
  out << kMagic << '\n';
  if (const auto* t = std::get_if<DecisionTree>(&model)) {
    write_tree(*t, out);
  } else if (const auto* l = std::get_if<LinearModel>(&model)) {
    out << "linear\nweights";
    for (double w : l->weights) out << ' ' << format_double(w);
    out << "\nintercept " << format_double(l->intercept) << '\n';
  } else if (const auto* f = std::get_if<ForestModel>(&model)) {
    out << "forest " << f->trees.size() << '\n';
    for (const auto& t : f->trees) write_tree(t, out);
  } else {
    const auto& b = std::get<BoostedModel>(model);
    out << "boosted " << format_double(b.base) << ' ' << b.stages.size() << '\n';
    for (const auto& s : b.stages) {
      out << "stage " << format_double(s.learning_rate) << '\n';
      write_tree(s.tree, out);
    }
  }
}

RegressionModel read_model(std::istream& in) {
  std::string magic;
  if (!std::getline(in, magic) || magic != kMagic) throw ParseError("not a model file (bad magic line)", 1);
  LineReader r(in, 1);
  auto t = r.next();
  if (t[0] == "tree") {
    r.unread(std::move(t));
    return read_tree(r);
  }
  if (t[0] == "linear" && t.size() == 1) {
    LinearModel m;
    const auto w = r.expect("weights", kNumFeatures);
    for (std::size_t i = 0; i < kNumFeatures; ++i) m.weights[i] = r.real(w[i + 1]);
    m.intercept = r.real(r.expect("intercept", 1)[1]);
    return m;
  }
  if (t[0] == "forest" && t.size() == 2) {
    ForestModel f;
    const auto k = r.count(t[1]);
    if (k == 0) throw ParseError("forest with zero trees", r.line());
    for (std::uint64_t i = 0; i < k; ++i) f.trees.push_back(read_tree(r));
    return f;
  }
  if (t[0] == "boosted" && t.size() == 3) {
    BoostedModel b;
    b.base = r.real(t[1]);
    const auto n = r.count(t[2]);
    for (std::uint64_t i = 0; i < n; ++i) {
      const double lr = r.real(r.expect("stage", 1)[1]);
      b.stages.push_back({read_tree(r), lr});
    }
    return b;
  }
  throw ParseError("unknown model kind '" + t[0] + "'", r.line());
}

void save_model(const RegressionModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_model(model, out);
}

RegressionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file " + path.string(), 0);
  return read_model(in);
}

}  // namespace predatw
