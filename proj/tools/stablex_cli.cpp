// stablex command-line tool. Exit codes: 0 ok, 2 bad input, 3 infeasible,
// 4 instance too large.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "stablex/assignment.hpp"
#include "stablex/csv_io.hpp"
#include "stablex/harness.hpp"
#include "stablex/kcenter.hpp"
#include "stablex/mst.hpp"
#include "stablex/pps.hpp"
#include "stablex/sampler.hpp"
#include "stablex/topk.hpp"

namespace {

using namespace stablex;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot write '" + path + "'");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t b = item.find_first_not_of(' ');
    std::size_t e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// lo:hi:count, evenly spaced and inclusive; or a comma list.
std::vector<double> parse_sweep(const std::string& spec) {
  std::vector<double> out;
  if (spec.empty()) return out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw InputError("sweep must be lo:hi:count");
    double lo = parse_number(parts[0], 0);
    double hi = parse_number(parts[1], 0);
    std::size_t n = parse_index(parts[2], 0);
    if (n == 0) throw InputError("sweep count must be positive");
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                           static_cast<double>(n - 1));
    }
    return out;
  }
  for (const std::string& s : split_list(spec)) {
    out.push_back(s == "inf" ? kInfinity : parse_number(s, 0));
  }
  return out;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("STABLEX_SEED");
  if (env && *env) return std::strtoull(env, nullptr, 0);
  return 0x5eed;
}

void write_distribution(std::ostream& out, const PpsDistribution& q, const KeyMap& keys) {
  out << "key,prob\n";
  for (const Entry& e : q.entries()) out << keys.name(e.key) << ',' << fmt(e.value) << '\n';
}

struct PpsInputs {
  KeyMap keys;
  WeightVector w;
  std::optional<PpsDistribution> prev;
};

PpsInputs load_pps(const std::string& weights, const std::string& prev) {
  PpsInputs in;
  std::ifstream wf = open_in(weights);
  in.w = WeightVector(read_keyed_csv(wf, "weight", in.keys));
  if (!prev.empty()) {
    std::ifstream pf = open_in(prev);
    KeyedValues p = read_keyed_csv(pf, "prob", in.keys);
    std::vector<Entry> probs(p.begin(), p.end());
    for (const Entry& e : probs) {
      if (!in.w.index_of(e.key)) throw InputError("prev key missing from weights: " + in.keys.name(e.key));
    }
    in.prev = PpsDistribution::from_probs(std::move(probs)).aligned_to(in.w);
  }
  return in;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Options {
  std::string weights, prev, next, sample, out, values, edges, matrix, points, dist, data;
  std::string prev_list, sweep_d, sweep_m, sweep_a, generator = "drifting-zipf", psi, json;
  std::string keymap;
  // NaN marks an unset --a / --D.
  double k = 0.0, a = kNaN, D = kNaN;
  bool tradeoff = false, prn = false;
  std::uint64_t seed = default_seed();
  std::size_t n = 100, steps = 10, inc_k = 5;
  double zipf_s = 1.0, drift = 0.05, noise = 0.1, scale = 1000.0;
};

bool given(double v) { return !std::isnan(v); }

double price(const Options& o) {
  if (!given(o.a)) return 0.0;
  if (o.a < 0.0) throw DomainError("--a must be nonnegative");
  return o.a;
}

bool has_budget(const Options& o) {
  if (!given(o.D)) return false;
  if (o.D < 0.0) throw DomainError("--D must be nonnegative");
  return true;
}

void write_keymap(const Options& o, const KeyMap& keys) {
  if (o.keymap.empty()) return;
  Output out(o.keymap);
  out.get() << "id,key\n";
  for (Key k = 0; k < keys.size(); ++k) out.get() << k << ',' << keys.name(k) << '\n';
}

int pps_solve(const Options& o) {
  PpsInputs in = load_pps(o.weights, o.prev);
  Output out(o.out);
  if (!in.prev) {
    if (o.k <= 0.0) throw InputError("--k is required without --prev");
    PpsSolution s = pps_probabilities(in.w, o.k);
    out.get() << "# tau=" << fmt(s.threshold) << '\n';
    write_distribution(out.get(), s.dist, in.keys);
  } else {
    if (o.k > 0.0 && std::abs(o.k - in.prev->target_size()) > 1e-9 * std::max(1.0, o.k)) {
      throw InputError("--k differs from the size of --prev");
    }
    if (given(o.a) == has_budget(o)) throw InputError("give exactly one of --a and --D");
    if (has_budget(o)) {
      double dmax = max_changeout(in.w, *in.prev);
      if (o.D > dmax + 1e-9) throw DomainError("--D exceeds the maximum changeout " + fmt(dmax));
      PpsDistribution q = delta_opt(in.w, *in.prev, std::min(o.D, dmax));
      out.get() << "# changeout=" << fmt(l1_distance(*in.prev, q)) << '\n';
      write_distribution(out.get(), q, in.keys);
    } else {
      AlphaSolution s = alpha_opt(in.w, *in.prev, price(o));
      out.get() << "# changeout=" << fmt(s.changeout) << " tau_lo=" << fmt(s.tau_lo)
                << " tau_hi=" << fmt(s.tau_hi) << '\n';
      write_distribution(out.get(), s.dist, in.keys);
    }
  }
  write_keymap(o, in.keys);
  return 0;
}

int pps_tradeoff(const Options& o) {
  PpsInputs in = load_pps(o.weights, o.prev);
  if (!in.prev) throw InputError("--prev is required");
  Output out(o.out);
  if (has_budget(o)) {
    double dmax = max_changeout(in.w, *in.prev);
    if (o.D > dmax + 1e-9) throw DomainError("--D exceeds the maximum changeout " + fmt(dmax));
    write_distribution(out.get(), delta_opt(in.w, *in.prev, std::min(o.D, dmax)), in.keys);
    return 0;
  }
  out.get() << "changeout,fitness,multiplier\n";
  TradeoffCurve curve = pps_tradeoff(in.w, *in.prev);
  for (const TradeoffPoint& p : curve.points()) {
    out.get() << fmt(p.changeout) << ',' << fmt(p.fitness) << ',' << fmt(p.multiplier) << '\n';
  }
  return 0;
}

SampleSet read_sample(const std::string& path, const KeyMap& keys) {
  std::ifstream in = open_in(path);
  std::vector<Key> out;
  for (const CsvRow& row : read_csv(in, {"key"})) {
    if (!keys.has(row.fields[0])) throw InputError("unknown sample key", row.line);
    out.push_back(keys.at(row.fields[0]));
  }
  return make_output_set(std::move(out));
}

int pps_subsample(const Options& o) {
  if (o.next.empty()) throw InputError("--next is required");
  KeyMap keys;
  std::ifstream nf = open_in(o.next);
  KeyedValues q = read_keyed_csv(nf, "prob", keys);
  PpsDistribution next = PpsDistribution::from_probs({q.begin(), q.end()});
  SampleSet s2;
  if (o.prn) {
    PrnTable table(o.seed);
    s2 = prn_sample(next, table);
  } else {
    if (o.prev.empty() || o.sample.empty()) throw InputError("--prev and --sample are required");
    std::ifstream pf = open_in(o.prev);
    KeyedValues p = read_keyed_csv(pf, "prob", keys);
    PpsDistribution prev = PpsDistribution::from_probs({p.begin(), p.end()});
    SampleSet s = read_sample(o.sample, keys);
    Rng rng(o.seed);
    s2 = subsample(s, prev, next, rng);
  }
  Output out(o.out);
  out.get() << "key\n";
  for (Key k : s2) out.get() << keys.name(k) << '\n';
  return 0;
}

OutputSet parse_key_list(const std::string& list, const KeyMap& keys) {
  std::vector<Key> out;
  for (const std::string& s : split_list(list)) out.push_back(keys.at(s));
  return make_output_set(std::move(out));
}

PsiSpec parse_psi(const std::string& spec) {
  if (spec.empty() || spec == "identity") return PsiSpec::identity();
  if (spec.rfind("power:", 0) == 0) return PsiSpec::power(parse_number(spec.substr(6), 0));
  throw InputError("unknown --psi '" + spec + "' (identity or power:P)");
}

int run_topk(const Options& o) {
  KeyMap keys;
  std::ifstream vf = open_in(o.values);
  KeyedValues x = psi_transform(read_keyed_csv(vf, "value", keys), parse_psi(o.psi));
  std::size_t k = static_cast<std::size_t>(o.k);
  if (o.k <= 0.0 || static_cast<double>(k) != o.k) throw InputError("--k must be a positive integer");
  OutputSet prev = o.prev_list.empty() ? top_k(x, k) : parse_key_list(o.prev_list, keys);
  if (prev.size() != k) throw InputError("--prev must list k keys");
  Output out(o.out);
  if (o.tradeoff) {
    TopKTradeoff t = topk_tradeoff(x, prev);
    out.get() << "out,in,gain\n";
    for (const Swap& s : t.plan.swaps) {
      out.get() << keys.name(s.out) << ',' << keys.name(s.in) << ',' << fmt(s.gain) << '\n';
    }
    return 0;
  }
  OutputSet s;
  if (has_budget(o)) {
    s = delta_stable(topk_problem(k), x, prev, static_cast<std::size_t>(o.D));
  } else {
    s = topk_alpha_stable(x, prev, price(o));
  }
  out.get() << "key\n";
  for (Key key : s) out.get() << keys.name(key) << '\n';
  return 0;
}

struct GraphInput {
  KeyMap vertices;
  WeightedGraph g;
  std::vector<std::pair<std::string, std::string>> names;
};

GraphInput load_graph(const std::string& path) {
  GraphInput in;
  std::ifstream f = open_in(path);
  std::vector<GraphEdge> edges;
  for (const CsvRow& row : read_csv(f, {"u", "v", "weight"})) {
    std::size_t u = in.vertices.intern(row.fields[0]);
    std::size_t v = in.vertices.intern(row.fields[1]);
    double w = parse_number(row.fields[2], row.line);
    if (u == v || w < 0.0) throw InputError("bad edge", row.line);
    edges.push_back({u, v, w, edges.size()});
    in.names.push_back({row.fields[0], row.fields[1]});
  }
  try {
    in.g = WeightedGraph(in.vertices.size(), std::move(edges));
  } catch (const ContractViolation& e) {
    throw InputError(e.what());
  }
  return in;
}

OutputSet read_tree(const std::string& path, const GraphInput& in) {
  std::ifstream f = open_in(path);
  std::vector<Key> keys;
  for (const CsvRow& row : read_csv(f, {"u", "v"})) {
    bool found = false;
    for (std::size_t e = 0; e < in.names.size(); ++e) {
      const auto& [a, b] = in.names[e];
      if ((a == row.fields[0] && b == row.fields[1]) ||
          (a == row.fields[1] && b == row.fields[0])) {
        keys.push_back(e);
        found = true;
      }
    }
    if (!found) throw InputError("edge not in graph", row.line);
  }
  return make_output_set(std::move(keys));
}

int run_mst(const Options& o) {
  GraphInput in = load_graph(o.edges);
  OutputSet prev = o.prev.empty() ? OutputSet{} : read_tree(o.prev, in);
  Output out(o.out);
  if (o.tradeoff) {
    if (o.prev.empty()) throw InputError("--tradeoff needs --prev");
    MstTradeoff t = mst_tradeoff(in.g, prev);
    out.get() << "changeout,weight,min_price\n";
    for (const TradeoffPoint& p : t.curve.points()) {
      out.get() << fmt(p.changeout) << ',' << fmt(-p.fitness) << ',' << fmt(p.multiplier) << '\n';
    }
    return 0;
  }
  OutputSet tree = o.prev.empty() ? mst(in.g) : alpha_stable_mst(in.g, prev, price(o));
  out.get() << "u,v,weight\n";
  for (Key e : tree) {
    out.get() << in.names[e].first << ',' << in.names[e].second << ','
              << fmt(in.g.edge(e).weight) << '\n';
  }
  return 0;
}

Matching parse_matching(const std::string& list, std::size_t n) {
  Matching m;
  for (const std::string& s : split_list(list)) m.push_back(parse_index(s, 0));
  if (m.size() != n) throw InputError("--prev must give one column per row");
  try {
    keys_to_matching(matching_keys(m), n);
  } catch (const ContractViolation&) {
    throw InputError("--prev is not a permutation");
  }
  return m;
}

int run_assign(const Options& o) {
  std::ifstream f = open_in(o.matrix);
  std::vector<std::vector<double>> rows = read_matrix_csv(f);
  BipartiteWeights w;
  try {
    w = BipartiteWeights(rows);
  } catch (const ContractViolation& e) {
    throw InputError(e.what());
  }
  std::size_t n = w.size();
  Output out(o.out);
  if (o.prev_list.empty()) {
    if (o.tradeoff) throw InputError("--tradeoff needs --prev");
    Matching m = max_assignment(w);
    out.get() << "row,col,weight\n";
    for (std::size_t i = 0; i < n; ++i) out.get() << i << ',' << m[i] << ',' << fmt(w.at(i, m[i])) << '\n';
    return 0;
  }
  Matching prev = parse_matching(o.prev_list, n);
  if (o.tradeoff) {
    LinearEnvelope env = assignment_tradeoff(w, prev);
    out.get() << "slope,intercept,a_lo,a_hi,matching\n";
    for (const EnvelopePiece& p : env.pieces()) {
      Matching m = keys_to_matching(p.witness, n);
      std::string cols;
      for (std::size_t i = 0; i < n; ++i) cols += (i ? " " : "") + std::to_string(m[i]);
      out.get() << p.slope << ',' << fmt(p.intercept) << ',' << fmt(p.a_lo) << ','
                << fmt(p.a_hi) << ',' << cols << '\n';
    }
    return 0;
  }
  Matching m = alpha_stable_assignment(w, prev, price(o));
  out.get() << "row,col,weight\n";
  for (std::size_t i = 0; i < n; ++i) out.get() << i << ',' << m[i] << ',' << fmt(w.at(i, m[i])) << '\n';
  return 0;
}

int run_kcenter(const Options& o) {
  KeyMap ids;
  MetricPoints pts;
  try {
    if (!o.points.empty()) {
      std::ifstream f = open_in(o.points);
      std::vector<std::vector<double>> coords;
      for (const CsvRow& row : read_csv(f, {})) {
        if (row.fields.size() < 2) throw InputError("point rows are id,coord,...", row.line);
        if (ids.has(row.fields[0])) throw InputError("duplicate point id", row.line);
        ids.intern(row.fields[0]);
        std::vector<double> c;
        for (std::size_t i = 1; i < row.fields.size(); ++i) c.push_back(parse_number(row.fields[i], row.line));
        coords.push_back(std::move(c));
      }
      pts = MetricPoints::from_coordinates(std::move(coords));
    } else if (!o.dist.empty()) {
      std::ifstream f = open_in(o.dist);
      std::vector<std::vector<double>> d = read_matrix_csv(f);
      for (std::size_t i = 0; i < d.size(); ++i) ids.intern(std::to_string(i));
      pts = MetricPoints::from_matrix(std::move(d));
    } else {
      throw InputError("give --points or --dist");
    }
  } catch (const ContractViolation& e) {
    throw InputError(e.what());
  }
  std::size_t k = static_cast<std::size_t>(o.k);
  if (o.k <= 0.0 || static_cast<double>(k) != o.k) throw InputError("--k must be a positive integer");
  Output out(o.out);
  std::vector<std::size_t> centers;
  double radius = 0.0;
  if (o.prev_list.empty()) {
    GonzalezResult g = gonzalez_fixed(pts, {}, k);
    centers = g.centers;
    radius = g.radius;
  } else {
    std::vector<std::size_t> prev;
    for (const std::string& s : split_list(o.prev_list)) prev.push_back(ids.at(s));
    KCenterResult r = stable_kcenter(pts, prev, k, price(o));
    centers = r.centers;
    radius = r.radius;
  }
  out.get() << "# radius=" << fmt(radius) << '\n' << "center\n";
  for (std::size_t c : centers) out.get() << ids.name(c) << '\n';
  return 0;
}

TimeSeriesDataset load_data(const Options& o) {
  if (!o.data.empty()) {
    std::ifstream f = open_in(o.data);
    return read_dataset_csv(f);
  }
  SynthSpec spec;
  spec.generator = o.generator;
  spec.n = o.n;
  spec.steps = o.steps;
  spec.zipf_s = o.zipf_s;
  spec.drift = o.drift;
  spec.noise = o.noise;
  spec.scale = o.scale;
  spec.inc_k = o.inc_k;
  return synth_dataset(spec, o.seed);
}

void emit_report(const Options& o, const ExperimentReport& r) {
  Output out(o.out);
  r.write_csv(out.get());
  if (!o.json.empty()) {
    Output js(o.json);
    r.write_json(js.get());
  }
}

int simulate_pps(const Options& o) {
  PpsExperimentConfig c;
  c.k = o.k;
  c.d_values = parse_sweep(o.sweep_d);
  c.m_values = parse_sweep(o.sweep_m);
  c.mode = o.prn ? SampleMode::kPrn : SampleMode::kSubsample;
  c.seed = o.seed;
  if (c.k <= 0.0) throw InputError("--k is required");
  emit_report(o, run_pps_experiment(load_data(o), c));
  return 0;
}

int simulate_topk(const Options& o) {
  TopKExperimentConfig c;
  c.k = static_cast<std::size_t>(o.k);
  if (o.k <= 0.0 || static_cast<double>(c.k) != o.k) throw InputError("--k must be a positive integer");
  c.a_values = parse_sweep(o.sweep_a);
  c.m_values = parse_sweep(o.sweep_m);
  emit_report(o, run_topk_experiment(load_data(o), c));
  return 0;
}

int run_synth(const Options& o) {
  Output out(o.out);
  write_dataset_csv(out.get(), load_data(o));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable extensions of sampling and combinatorial optimization.\n"
               "Default seed: $STABLEX_SEED, else 0x5eed."};
  app.require_subcommand(1);
  Options o;
  int (*action)(const Options&) = nullptr;

  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output file (default stdout)");
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed"); };

  CLI::App* pps = app.add_subcommand("pps", "Stable PPS probabilities");
  pps->require_subcommand(1);
  CLI::App* solve = pps->add_subcommand("solve", "PPS, or stable PPS against --prev");
  solve->add_option("--weights", o.weights, "CSV key,weight")->required();
  solve->add_option("--prev", o.prev, "CSV key,prob of the previous distribution");
  solve->add_option("--k", o.k, "Expected sample size");
  solve->add_option("--D", o.D, "Changeout budget (L1)");
  solve->add_option("--a", o.a, "Stability price");
  solve->add_option("--keymap", o.keymap, "Write the key id mapping here");
  add_out(solve);
  solve->callback([&] { action = pps_solve; });
  CLI::App* trade = pps->add_subcommand("tradeoff", "Tradeoff curve, or the point at --D");
  trade->add_option("--weights", o.weights, "CSV key,weight")->required();
  trade->add_option("--prev", o.prev, "CSV key,prob")->required();
  trade->add_option("--D", o.D, "Emit the distribution at this changeout");
  add_out(trade);
  trade->callback([&] { action = pps_tradeoff; });
  CLI::App* sub = pps->add_subcommand("subsample", "Move a sample from --prev to --next");
  sub->add_option("--prev", o.prev, "CSV key,prob");
  sub->add_option("--next", o.next, "CSV key,prob")->required();
  sub->add_option("--sample", o.sample, "CSV key list drawn from --prev");
  sub->add_flag("--prn", o.prn, "Permanent random numbers instead of subsampling");
  add_seed(sub);
  add_out(sub);
  sub->callback([&] { action = pps_subsample; });

  CLI::App* topk = app.add_subcommand("topk", "Stable top-k");
  topk->add_option("--values", o.values, "CSV key,value")->required();
  topk->add_option("--k", o.k, "Set size")->required();
  topk->add_option("--prev", o.prev_list, "Previous set, comma separated keys");
  topk->add_option("--a", o.a, "Stability price");
  topk->add_option("--D", o.D, "Changeout budget (number of swaps)");
  topk->add_option("--psi", o.psi, "identity or power:P");
  topk->add_flag("--tradeoff", o.tradeoff, "Print the swap plan");
  add_out(topk);
  topk->callback([&] { action = run_topk; });

  CLI::App* mstc = app.add_subcommand("mst", "Stable minimum spanning tree");
  mstc->add_option("--edges", o.edges, "CSV u,v,weight")->required();
  mstc->add_option("--prev", o.prev, "CSV u,v of the previous tree");
  mstc->add_option("--a", o.a, "Stability price");
  mstc->add_flag("--tradeoff", o.tradeoff, "Print the tradeoff");
  add_out(mstc);
  mstc->callback([&] { action = run_mst; });

  CLI::App* assign = app.add_subcommand("assign", "Stable maximum-weight assignment");
  assign->add_option("--matrix", o.matrix, "CSV weight matrix, no header")->required();
  assign->add_option("--prev", o.prev_list, "Previous matching: column of each row");
  assign->add_option("--a", o.a, "Stability price");
  assign->add_flag("--tradeoff", o.tradeoff, "Print the envelope lines");
  add_out(assign);
  assign->callback([&] { action = run_assign; });

  CLI::App* kc = app.add_subcommand("kcenter", "Stable k-center");
  kc->add_option("--points", o.points, "CSV id,coord,... without header");
  kc->add_option("--dist", o.dist, "CSV distance matrix without header");
  kc->add_option("--k", o.k, "Number of centers")->required();
  kc->add_option("--prev", o.prev_list, "Previous centers, comma separated ids");
  kc->add_option("--a", o.a, "Stability price");
  add_out(kc);
  kc->callback([&] { action = run_kcenter; });

  auto add_data = [&](CLI::App* c) {
    c->add_option("--data", o.data, "CSV step,key,weight (otherwise synthetic)");
    c->add_option("--generator", o.generator, "zipf-stationary, random-increment, drifting-zipf");
    c->add_option("--n", o.n, "Synthetic key count");
    c->add_option("--steps", o.steps, "Synthetic step count");
    c->add_option("--zipf-s", o.zipf_s, "Zipf exponent");
    c->add_option("--drift", o.drift, "Adjacent rank swaps per step, fraction of n");
    c->add_option("--noise", o.noise, "Lognormal noise sigma");
    c->add_option("--scale", o.scale, "Weight of rank 1");
    c->add_option("--inc-k", o.inc_k, "random-increment: 2*inc-k entries per step");
    add_seed(c);
  };
  CLI::App* sim = app.add_subcommand("simulate", "Experiment reports");
  sim->require_subcommand(1);
  CLI::App* simp = sim->add_subcommand("pps", "Stable PPS vs EWMA PPS");
  add_data(simp);
  simp->add_option("--k", o.k, "Expected sample size")->required();
  simp->add_option("--sweep-D", o.sweep_d, "lo:hi:count or list");
  simp->add_option("--sweep-m", o.sweep_m, "EWMA means, lo:hi:count or list");
  simp->add_flag("--prn", o.prn, "PRN sampling instead of subsampling");
  simp->add_option("--json", o.json, "Write the JSON trace here");
  add_out(simp);
  simp->callback([&] { action = simulate_pps; });
  CLI::App* simt = sim->add_subcommand("topk", "Stable top-k vs EWMA top-k");
  add_data(simt);
  simt->add_option("--k", o.k, "Set size")->required();
  simt->add_option("--sweep-a", o.sweep_a, "Prices, lo:hi:count or list (inf allowed)");
  simt->add_option("--sweep-m", o.sweep_m, "EWMA means");
  simt->add_option("--json", o.json, "Write the JSON trace here");
  add_out(simt);
  simt->callback([&] { action = simulate_topk; });

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  add_data(synth);
  add_out(synth);
  synth->callback([&] { action = run_synth; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action(o) : 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const ScaleError& e) {
    std::cerr << "too large: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
