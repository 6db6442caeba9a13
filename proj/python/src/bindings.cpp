// Python bindings. Weight and probability vectors are plain lists indexed
// by key 0..n-1; sets are lists of keys.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stablex/assignment.hpp"
#include "stablex/harness.hpp"
#include "stablex/incremental_pps.hpp"
#include "stablex/kcenter.hpp"
#include "stablex/mst.hpp"
#include "stablex/pps.hpp"
#include "stablex/sampler.hpp"
#include "stablex/topk.hpp"

namespace py = pybind11;
using namespace stablex;

namespace {

WeightVector weights(const std::vector<double>& w) { return WeightVector::from_values(w); }
PpsDistribution probs(const std::vector<double>& p) { return PpsDistribution::from_values(p); }

KeyedValues keyed(const std::vector<double>& x) {
  KeyedValues out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back({i, x[i]});
  return out;
}

py::list curve_rows(const TradeoffCurve& c) {
  py::list out;
  for (const TradeoffPoint& p : c.points()) out.append(py::make_tuple(p.changeout, p.fitness, p.multiplier));
  return out;
}

py::list report_rows(const ExperimentReport& r) {
  py::list out;
  for (const ReportRow& row : r.rows) {
    py::dict d;
    d["method"] = row.method;
    d["param"] = row.param;
    d["changeout"] = row.changeout;
    d["fit"] = row.fit;
    d["realized_changeout"] = row.realized;
    out.append(d);
  }
  return out;
}

TimeSeriesDataset dataset(const std::vector<std::vector<double>>& rows) {
  TimeSeriesDataset d;
  if (rows.empty()) throw InputError("dataset has no steps");
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    d.keys.push_back(i);
    d.names.push_back(std::to_string(i));
  }
  d.weights = rows;
  return d;
}

WeightedGraph graph(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  std::vector<GraphEdge> es;
  for (const auto& [u, v, w] : edges) es.push_back({u, v, w, es.size()});
  return WeightedGraph(n, es);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stable PPS sampling and stable combinatorial solvers";

  // Translators run newest first, so subclasses are registered after Error.
  auto& error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", error.ptr());
  py::register_exception<ScaleError>(m, "ScaleError", error.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", error.ptr());

  // PPS
  m.def("pps_probabilities", [](const std::vector<double>& w, double k) {
    PpsSolution s = pps_probabilities(weights(w), k);
    return py::make_tuple(s.dist.probs(), s.threshold);
  }, py::arg("weights"), py::arg("k"), "Returns (probabilities, threshold).");
  m.def("max_changeout", [](const std::vector<double>& w, const std::vector<double>& p) {
    return max_changeout(weights(w), probs(p));
  }, py::arg("weights"), py::arg("prev"));
  m.def("delta_opt", [](const std::vector<double>& w, const std::vector<double>& p, double D) {
    return delta_opt(weights(w), probs(p), D).probs();
  }, py::arg("weights"), py::arg("prev"), py::arg("D"));
  m.def("alpha_opt", [](const std::vector<double>& w, const std::vector<double>& p, double a) {
    AlphaSolution s = alpha_opt(weights(w), probs(p), a);
    py::dict d;
    d["probs"] = s.dist.probs();
    d["changeout"] = s.changeout;
    d["tau_lo"] = s.tau_lo;
    d["tau_hi"] = s.tau_hi;
    return d;
  }, py::arg("weights"), py::arg("prev"), py::arg("a"));
  m.def("alpha_of_changeout", [](const std::vector<double>& w, const std::vector<double>& p, double D) {
    return alpha_of_changeout(weights(w), probs(p), D);
  }, py::arg("weights"), py::arg("prev"), py::arg("D"));
  m.def("alpha_upper", [](const std::vector<double>& w, const std::vector<double>& p) {
    return alpha_upper(weights(w), probs(p));
  }, py::arg("weights"), py::arg("prev"));
  m.def("pps_tradeoff", [](const std::vector<double>& w, const std::vector<double>& p) {
    return curve_rows(pps_tradeoff(weights(w), probs(p)));
  }, py::arg("weights"), py::arg("prev"), "List of (changeout, fitness, multiplier).");
  m.def("ht_variance", [](const std::vector<double>& w, const std::vector<double>& q) {
    return ht_variance(weights(w), probs(q));
  }, py::arg("weights"), py::arg("probs"));

  // Sampling
  m.def("subsample", [](const std::vector<Key>& sample, const std::vector<double>& p,
                        const std::vector<double>& q, std::uint64_t seed) {
    Rng rng(seed);
    return subsample(make_output_set(sample), probs(p), probs(q), rng);
  }, py::arg("sample"), py::arg("prev"), py::arg("next"), py::arg("seed") = 0x5eed);
  m.def("poisson_sample", [](const std::vector<double>& p, std::uint64_t seed) {
    Rng rng(seed);
    return poisson_sample(probs(p), rng);
  }, py::arg("probs"), py::arg("seed") = 0x5eed);
  m.def("prn_sample", [](const std::vector<double>& p, std::uint64_t seed) {
    PrnTable table(seed);
    return prn_sample(probs(p), table);
  }, py::arg("probs"), py::arg("seed") = 0x5eed);

  py::class_<StableState>(m, "StableState")
      .def(py::init([](const std::vector<double>& w, double k, double a, std::uint64_t seed) {
             return StableState::build(weights(w), k, a, seed);
           }),
           py::arg("weights"), py::arg("k"), py::arg("a"), py::arg("seed") = 0x5eed)
      .def("update", [](StableState& s, Key key, double w) {
        ChangeReport r = s.update_weight(key, w);
        py::dict d;
        d["l1"] = r.l1;
        d["inserted"] = r.inserted;
        d["removed"] = r.removed;
        d["repaired"] = r.repaired;
        return d;
      }, py::arg("key"), py::arg("weight"))
      .def("probability", &StableState::probability, py::arg("key"))
      .def("distribution", [](const StableState& s) {
        std::map<Key, double> out;
        PpsDistribution dist = s.current_distribution();
        for (const Entry& e : dist.entries()) out[e.key] = e.value;
        return out;
      })
      .def("sample", &StableState::current_sample)
      .def_property_readonly("tau_lo", &StableState::tau_lo)
      .def_property_readonly("tau_hi", &StableState::tau_hi)
      .def_property_readonly("k", &StableState::k)
      .def_property_readonly("price", &StableState::price);

  // Top-k
  m.def("top_k", [](const std::vector<double>& x, std::size_t k) { return top_k(keyed(x), k); },
        py::arg("values"), py::arg("k"));
  m.def("topk_alpha_stable", [](const std::vector<double>& x, const std::vector<Key>& prev, double a) {
    return topk_alpha_stable(keyed(x), make_output_set(prev), a);
  }, py::arg("values"), py::arg("prev"), py::arg("a"));
  m.def("topk_swaps", [](const std::vector<double>& x, const std::vector<Key>& prev) {
    py::list out;
    for (const Swap& s : swap_plan(keyed(x), make_output_set(prev)).swaps) {
      out.append(py::make_tuple(s.out, s.in, s.gain));
    }
    return out;
  }, py::arg("values"), py::arg("prev"), "List of (out, in, gain), gains non-increasing.");
  m.def("topk_tradeoff", [](const std::vector<double>& x, const std::vector<Key>& prev) {
    return curve_rows(topk_tradeoff(keyed(x), make_output_set(prev)).curve);
  }, py::arg("values"), py::arg("prev"));

  py::class_<TopKState>(m, "TopKState")
      .def(py::init([](const std::vector<double>& x, std::size_t k, double a) {
             return TopKState(keyed(x), k, a);
           }),
           py::arg("values"), py::arg("k"), py::arg("a"))
      .def("update", [](TopKState& s, Key key, double value) -> py::object {
        std::optional<Swap> sw = s.update(key, value);
        if (!sw) return py::none();
        return py::make_tuple(sw->out, sw->in, sw->gain);
      }, py::arg("key"), py::arg("value"))
      .def("current", &TopKState::current_set);

  // MST, assignment, k-center
  m.def("alpha_stable_mst",
        [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
           const std::vector<Key>& prev, double a) {
          WeightedGraph g = graph(n, edges);
          return prev.empty() ? mst(g) : alpha_stable_mst(g, make_output_set(prev), a);
        },
        py::arg("n"), py::arg("edges"), py::arg("prev"), py::arg("a"),
        "Edges are (u, v, weight); trees are lists of edge indices.");
  m.def("alpha_stable_assignment",
        [](const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& prev, double a) {
          return alpha_stable_assignment(BipartiteWeights(w), prev, a);
        },
        py::arg("weights"), py::arg("prev"), py::arg("a"));
  m.def("assignment_tradeoff",
        [](const std::vector<std::vector<double>>& w, const std::vector<std::size_t>& prev) {
          py::list out;
          LinearEnvelope env = assignment_tradeoff(BipartiteWeights(w), prev);
          for (const EnvelopePiece& p : env.pieces()) {
            out.append(py::make_tuple(p.slope, p.intercept, p.a_lo, p.a_hi));
          }
          return out;
        },
        py::arg("weights"), py::arg("prev"), "List of (slope, intercept, a_lo, a_hi).");
  m.def("stable_kcenter",
        [](const std::vector<std::vector<double>>& coords, const std::vector<std::size_t>& prev,
           std::size_t k, double a) {
          KCenterResult r = stable_kcenter(MetricPoints::from_coordinates(coords), prev, k, a);
          py::dict d;
          d["centers"] = r.centers;
          d["radius"] = r.radius;
          d["changeout"] = r.changeout;
          d["candidates"] = r.candidates;
          return d;
        },
        py::arg("points"), py::arg("prev"), py::arg("k"), py::arg("a"));

  // Experiments
  m.def("synth_dataset",
        [](const std::string& generator, std::size_t n, std::size_t steps, double drift,
           std::uint64_t seed) {
          SynthSpec spec;
          spec.generator = generator;
          spec.n = n;
          spec.steps = steps;
          spec.drift = drift;
          return synth_dataset(spec, seed).weights;
        },
        py::arg("generator") = "drifting-zipf", py::arg("n") = 100, py::arg("steps") = 10,
        py::arg("drift") = 0.05, py::arg("seed") = 0x5eed, "Rows of weights, one per step.");
  m.def("simulate_pps",
        [](const std::vector<std::vector<double>>& rows, double k, const std::vector<double>& d_values,
           const std::vector<double>& m_values, bool prn, std::uint64_t seed) {
          PpsExperimentConfig c;
          c.k = k;
          c.d_values = d_values;
          c.m_values = m_values;
          c.mode = prn ? SampleMode::kPrn : SampleMode::kSubsample;
          c.seed = seed;
          return report_rows(run_pps_experiment(dataset(rows), c));
        },
        py::arg("rows"), py::arg("k"), py::arg("d_values"), py::arg("m_values") = std::vector<double>{},
        py::arg("prn") = false, py::arg("seed") = 0x5eed);
  m.def("simulate_topk",
        [](const std::vector<std::vector<double>>& rows, std::size_t k,
           const std::vector<double>& a_values, const std::vector<double>& m_values) {
          TopKExperimentConfig c;
          c.k = k;
          c.a_values = a_values;
          c.m_values = m_values;
          return report_rows(run_topk_experiment(dataset(rows), c));
        },
        py::arg("rows"), py::arg("k"), py::arg("a_values"), py::arg("m_values") = std::vector<double>{});
}
