#include "stablex/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <random>

#include "stablex/pps.hpp"
#include "stablex/sampler.hpp"
#include "stablex/topk.hpp"

namespace stablex {

WeightVector TimeSeriesDataset::step(std::size_t t) const {
  std::vector<Entry> e;
  e.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) e.push_back({keys[i], weights[t][i]});
  return WeightVector(std::move(e));
}

void TimeSeriesDataset::validate() const {
  if (weights.empty()) throw ContractViolation("dataset has no steps");
  if (!names.empty() && names.size() != keys.size()) {
    throw ContractViolation("dataset names do not match keys");
  }
  for (const auto& row : weights) {
    if (row.size() != keys.size()) throw ContractViolation("dataset step has wrong length");
    for (double w : row) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw ContractViolation("dataset weight invalid");
    }
  }
}

TimeSeriesDataset read_dataset_csv(std::istream& in) {
  KeyMap keys;
  struct Cell {
    std::size_t step;
    Key key;
    double w;
  };
  std::vector<Cell> cells;
  std::size_t steps = 0;
  std::map<std::pair<std::size_t, Key>, std::size_t> seen;
  for (const CsvRow& row : read_csv(in, {"step", "key", "weight"})) {
    std::size_t t = parse_index(row.fields[0], row.line);
    if (row.fields[1].empty()) throw InputError("empty key", row.line);
    Key k = keys.intern(row.fields[1]);
    double w = parse_number(row.fields[2], row.line);
    if (w < 0.0) throw InputError("negative weight", row.line);
    if (!seen.emplace(std::make_pair(t, k), row.line).second) {
      throw InputError("duplicate (step, key)", row.line);
    }
    if (t > 1000000) throw InputError("step index too large", row.line);
    cells.push_back({t, k, w});
    steps = std::max(steps, t + 1);
  }
  if (cells.empty()) throw InputError("dataset is empty");
  TimeSeriesDataset data;
  for (Key k = 0; k < keys.size(); ++k) {
    data.keys.push_back(k);
    data.names.push_back(keys.name(k));
  }
  data.weights.assign(steps, std::vector<double>(keys.size(), 0.0));
  for (const Cell& c : cells) data.weights[c.step][c.key] = c.w;
  return data;
}

void write_dataset_csv(std::ostream& out, const TimeSeriesDataset& data) {
  out << "step,key,weight\n";
  char buf[64];
  for (std::size_t t = 0; t < data.steps(); ++t) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.weights[t][i] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "%.12g", data.weights[t][i]);
      out << t << ',' << (data.names.empty() ? std::to_string(data.keys[i]) : data.names[i])
          << ',' << buf << '\n';
    }
  }
}

std::vector<std::vector<double>> ewma_weights(const TimeSeriesDataset& data, double m) {
  if (!(m >= 1.0)) throw DomainError("ewma_weights: m must be at least 1");
  data.validate();
  double beta = 1.0 - 1.0 / m;
  std::vector<std::vector<double>> out(data.steps());
  out[0] = data.weights[0];
  for (std::size_t t = 1; t < data.steps(); ++t) {
    out[t].resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      out[t][i] = (1.0 - beta) * data.weights[t][i] + beta * out[t - 1][i];
    }
  }
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double pps_fit(const WeightVector& w, const PpsDistribution& q) {
  return std::sqrt(std::max(0.0, ht_variance(w, q)));
}

std::size_t symmetric_difference(const SampleSet& a, const SampleSet& b) {
  return set_difference_size(a, b) + set_difference_size(b, a);
}

void finish_row(ReportRow& row) {
  double c = 0.0;
  double f = 0.0;
  double r = 0.0;
  for (const StepTrace& s : row.trace) {
    c += s.changeout;
    f += s.fit;
    r += s.realized;
  }
  double n = static_cast<double>(row.trace.size());
  row.changeout = c / n;
  row.fit = f / n;
  row.realized = r / n;
}

double clamp_k(const TimeSeriesDataset& data, double k, std::vector<std::string>& notes) {
  std::size_t min_pos = data.size();
  for (const auto& row : data.weights) {
    std::size_t pos = 0;
    for (double w : row) pos += w > 0.0 ? 1 : 0;
    min_pos = std::min(min_pos, pos);
  }
  if (min_pos == 0) throw InfeasibleError("some step has no positive weight");
  if (!(k > 0.0)) throw DomainError("k must be positive");
  if (k > static_cast<double>(min_pos)) {
    notes.push_back("k clamped from " + fmt(k) + " to " + std::to_string(min_pos));
    return static_cast<double>(min_pos);
  }
  return k;
}

// One sampling stream per report row so rows do not depend on sweep order.
struct Sampler {
  SampleMode mode;
  Rng rng;
  PrnTable prn;

  Sampler(SampleMode m, std::uint64_t seed, std::size_t row)
      : mode(m), rng(splitmix64(seed ^ (0x9e3779b97f4a7c15ull * (row + 1)))), prn(seed) {}

  SampleSet first(const PpsDistribution& p) {
    return mode == SampleMode::kPrn ? prn_sample(p, prn) : poisson_sample(p, rng);
  }
  SampleSet next(const SampleSet& s, const PpsDistribution& p, const PpsDistribution& q) {
    return mode == SampleMode::kPrn ? prn_sample(q, prn) : subsample(s, p, q, rng);
  }
};

}  // namespace

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "method,param,changeout,fit,realized_changeout\n";
  for (const ReportRow& r : rows) {
    out << r.method << ',' << fmt(r.param) << ',' << fmt(r.changeout) << ',' << fmt(r.fit) << ','
        << fmt(r.realized) << '\n';
  }
}

void ExperimentReport::write_json(std::ostream& out) const {
  nlohmann::json j;
  j["kind"] = kind;
  j["notes"] = notes;
  j["rows"] = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json row{{"method", r.method},
                       {"param", r.param},
                       {"changeout", r.changeout},
                       {"fit", r.fit},
                       {"realized_changeout", r.realized}};
    nlohmann::json trace = nlohmann::json::array();
    for (const StepTrace& s : r.trace) {
      trace.push_back({{"changeout", s.changeout}, {"realized", s.realized}, {"fit", s.fit}});
    }
    row["trace"] = std::move(trace);
    j["rows"].push_back(std::move(row));
  }
  out << j.dump(1) << '\n';
}

std::vector<const ReportRow*> ExperimentReport::method_rows(const std::string& method) const {
  std::vector<const ReportRow*> out;
  for (const ReportRow& r : rows) {
    if (r.method == method) out.push_back(&r);
  }
  return out;
}

ExperimentReport run_pps_experiment(const TimeSeriesDataset& data,
                                    const PpsExperimentConfig& config) {
  data.validate();
  ExperimentReport report;
  report.kind = "pps";
  double k = clamp_k(data, config.k, report.notes);
  report.notes.push_back(
      "ewma: smoothing runs over zero weights; sampling uses keys present at the step");
  report.notes.push_back(std::string("sampling: ") +
                         (config.mode == SampleMode::kPrn ? "prn" : "subsample"));
  std::size_t row_index = 0;

  std::vector<WeightVector> steps;
  for (std::size_t t = 0; t < data.steps(); ++t) steps.push_back(data.step(t));

  for (double D : config.d_values) {
    if (!(D >= 0.0)) throw DomainError("changeout budget must be nonnegative");
    ReportRow row{"stable", D, 0, 0, 0, {}};
    Sampler sampler(config.mode, config.seed, row_index++);
    PpsDistribution p = pps_probabilities(steps[0], k).dist;
    SampleSet s = sampler.first(p);
    row.trace.push_back({0.0, 0.0, pps_fit(steps[0], p)});
    for (std::size_t t = 1; t < data.steps(); ++t) {
      double dmax = max_changeout(steps[t], p);
      PpsDistribution q = delta_opt(steps[t], p, std::min(D, dmax));
      SampleSet s2 = sampler.next(s, p, q);
      row.trace.push_back({l1_distance(p, q), static_cast<double>(symmetric_difference(s, s2)),
                           pps_fit(steps[t], q)});
      p = std::move(q);
      s = std::move(s2);
    }
    finish_row(row);
    report.rows.push_back(std::move(row));
  }

  for (double m : config.m_values) {
    std::vector<std::vector<double>> smooth = ewma_weights(data, m);
    ReportRow row{"ewma", m, 0, 0, 0, {}};
    Sampler sampler(config.mode, config.seed, row_index++);
    PpsDistribution p;
    SampleSet s;
    for (std::size_t t = 0; t < data.steps(); ++t) {
      std::vector<Entry> present;
      for (std::size_t i = 0; i < data.size(); ++i) {
        present.push_back({data.keys[i], data.weights[t][i] > 0.0 ? smooth[t][i] : 0.0});
      }
      PpsDistribution q = pps_probabilities(WeightVector(std::move(present)), k).dist;
      if (t == 0) {
        s = sampler.first(q);
        row.trace.push_back({0.0, 0.0, pps_fit(steps[0], q)});
      } else {
        SampleSet s2 = sampler.next(s, p, q);
        row.trace.push_back({l1_distance(p, q),
                             static_cast<double>(symmetric_difference(s, s2)),
                             pps_fit(steps[t], q)});
        s = std::move(s2);
      }
      p = std::move(q);
    }
    finish_row(row);
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

KeyedValues keyed(const TimeSeriesDataset& data, const std::vector<double>& row) {
  KeyedValues x;
  x.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) x.push_back({data.keys[i], row[i]});
  return x;
}

double topk_value(std::vector<double> row, std::size_t k) {
  if (k < row.size()) {
    std::nth_element(row.begin(), row.begin() + static_cast<long>(k), row.end(),
                     std::greater<double>());
  }
  return std::accumulate(row.begin(), row.begin() + static_cast<long>(k), 0.0);
}

}  // namespace

ExperimentReport run_topk_experiment(const TimeSeriesDataset& data,
                                     const TopKExperimentConfig& config) {
  data.validate();
  ExperimentReport report;
  report.kind = "topk";
  std::size_t k = config.k;
  if (k == 0 || k > data.size()) throw InfeasibleError("k must be in 1..number of keys");
  std::vector<double> best;
  for (const auto& row : data.weights) best.push_back(topk_value(row, k));

  for (double a : config.a_values) {
    if (!(a >= 0.0)) throw DomainError("price must be nonnegative");
    ReportRow row{"stable", a, 0, 0, 0, {}};
    KeyedValues x0 = keyed(data, data.weights[0]);
    OutputSet s = top_k(x0, k);
    row.trace.push_back({0.0, 0.0, best[0] - set_value(x0, s)});
    for (std::size_t t = 1; t < data.steps(); ++t) {
      KeyedValues x = keyed(data, data.weights[t]);
      OutputSet s2 = topk_alpha_stable(x, s, a);
      double change = static_cast<double>(set_difference_size(s2, s));
      row.trace.push_back({change, 2.0 * change, best[t] - set_value(x, s2)});
      s = std::move(s2);
    }
    finish_row(row);
    report.rows.push_back(std::move(row));
  }

  for (double m : config.m_values) {
    std::vector<std::vector<double>> smooth = ewma_weights(data, m);
    ReportRow row{"ewma", m, 0, 0, 0, {}};
    OutputSet prev;
    for (std::size_t t = 0; t < data.steps(); ++t) {
      OutputSet s = top_k(keyed(data, smooth[t]), k);
      double value = set_value(keyed(data, data.weights[t]), s);
      double change = t == 0 ? 0.0 : static_cast<double>(set_difference_size(s, prev));
      row.trace.push_back({change, 2.0 * change, best[t] - value});
      prev = std::move(s);
    }
    finish_row(row);
    report.rows.push_back(std::move(row));
  }
  return report;
}

double pareto_fraction(const ExperimentReport& report, const std::string& method,
                       const std::string& other, double rel_tol) {
  std::vector<std::pair<double, double>> curve;
  for (const ReportRow* r : report.method_rows(method)) curve.push_back({r->changeout, r->fit});
  std::vector<const ReportRow*> rivals = report.method_rows(other);
  if (curve.empty() || rivals.empty()) return 0.0;
  std::sort(curve.begin(), curve.end());
  auto fit_at = [&](double c) {
    if (c <= curve.front().first) return curve.front().second;
    if (c >= curve.back().first) return curve.back().second;
    auto it = std::lower_bound(curve.begin(), curve.end(), std::make_pair(c, -kInfinity));
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.first == lo.first) return std::min(hi.second, lo.second);
    double f = (c - lo.first) / (hi.first - lo.first);
    return lo.second + f * (hi.second - lo.second);
  };
  std::size_t wins = 0;
  for (const ReportRow* r : rivals) {
    if (fit_at(r->changeout) <= r->fit * (1.0 + rel_tol) + rel_tol) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(rivals.size());
}

namespace {

std::vector<std::size_t> random_ranks(std::size_t n, std::mt19937_64& gen) {
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 1);
  std::shuffle(rank.begin(), rank.end(), gen);
  return rank;
}

void fill_zipf(const SynthSpec& spec, const std::vector<std::size_t>& rank,
               std::mt19937_64& gen, std::vector<double>& row) {
  std::normal_distribution<double> normal(0.0, 1.0);
  row.resize(rank.size());
  for (std::size_t i = 0; i < rank.size(); ++i) {
    double base = spec.scale / std::pow(static_cast<double>(rank[i]), spec.zipf_s);
    row[i] = base * std::exp(spec.noise * normal(gen));
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> drifting_zipf_ranks(const SynthSpec& spec,
                                                          std::uint64_t seed) {
  std::mt19937_64 gen(splitmix64(seed));
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> rank = random_ranks(spec.n, gen);
  // by_rank[r - 1] is the key at rank r
  std::vector<std::size_t> by_rank(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) by_rank[rank[i] - 1] = i;
  auto swaps = static_cast<std::size_t>(std::llround(spec.drift * static_cast<double>(spec.n)));
  std::uniform_int_distribution<std::size_t> pick(0, spec.n >= 2 ? spec.n - 2 : 0);
  for (std::size_t t = 0; t < spec.steps; ++t) {
    if (t > 0 && spec.n >= 2) {
      for (std::size_t s = 0; s < swaps; ++s) {
        std::size_t r = pick(gen);
        std::swap(by_rank[r], by_rank[r + 1]);
        rank[by_rank[r]] = r + 1;
        rank[by_rank[r + 1]] = r + 2;
      }
    }
    out.push_back(rank);
  }
  return out;
}

TimeSeriesDataset synth_dataset(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.n == 0 || spec.steps == 0) throw InputError("synth: n and steps must be positive");
  TimeSeriesDataset data;
  for (std::size_t i = 0; i < spec.n; ++i) {
    data.keys.push_back(i);
    data.names.push_back("k" + std::to_string(i));
  }
  data.weights.resize(spec.steps);
  // Noise draws use a stream separate from the rank stream.
  std::mt19937_64 noise(splitmix64(seed + 1));
  if (spec.generator == "zipf-stationary") {
    std::mt19937_64 gen(splitmix64(seed));
    std::vector<std::size_t> rank = random_ranks(spec.n, gen);
    for (auto& row : data.weights) fill_zipf(spec, rank, noise, row);
  } else if (spec.generator == "drifting-zipf") {
    std::vector<std::vector<std::size_t>> ranks = drifting_zipf_ranks(spec, seed);
    for (std::size_t t = 0; t < spec.steps; ++t) fill_zipf(spec, ranks[t], noise, data.weights[t]);
  } else if (spec.generator == "random-increment") {
    if (2 * spec.inc_k > spec.n) throw InputError("synth: 2k exceeds n");
    std::mt19937_64 gen(splitmix64(seed));
    std::uniform_int_distribution<int> start(1, 10);
    std::vector<double> cur(spec.n);
    for (double& v : cur) v = start(gen);
    std::vector<std::size_t> idx(spec.n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < spec.steps; ++t) {
      if (t > 0) {
        for (std::size_t j = 0; j < 2 * spec.inc_k; ++j) {
          std::uniform_int_distribution<std::size_t> pick(j, spec.n - 1);
          std::swap(idx[j], idx[pick(gen)]);
          cur[idx[j]] += spec.increment;
        }
      }
      data.weights[t] = cur;
    }
  } else {
    throw InputError("unknown generator '" + spec.generator + "'");
  }
  return data;
}

}  // namespace stablex
