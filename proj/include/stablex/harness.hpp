// Experiment pipeline: weight time series, the EWMA baseline, per-step
// stable solvers and averaged (changeout, fit) reports.
#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stablex/core.hpp"
#include "stablex/csv_io.hpp"

namespace stablex {

// Dense snapshots over a fixed key universe; a key absent at some step has
// weight 0 there.
struct TimeSeriesDataset {
  std::vector<Key> keys;
  std::vector<std::string> names;  // external key names, parallel to keys
  std::vector<std::vector<double>> weights;  // weights[t][i]

  std::size_t steps() const { return weights.size(); }
  std::size_t size() const { return keys.size(); }
  WeightVector step(std::size_t t) const;
  // Throws ContractViolation on ragged rows, negative weights or no steps.
  void validate() const;
};

// step,key,weight with a header; steps are integers, listed in any order.
TimeSeriesDataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const TimeSeriesDataset& data);

// x~_t = (1 - beta) x_t + beta x~_{t-1}, beta = 1 - 1/m, x~_0 = x_0.
std::vector<std::vector<double>> ewma_weights(const TimeSeriesDataset& data, double m);

struct StepTrace {
  double changeout = 0.0;  // ||p_t - p_{t-1}||_1 or |S_t \ S_{t-1}|
  double realized = 0.0;   // |S_{t-1} delta S_t| of the drawn samples
  double fit = 0.0;
};

struct ReportRow {
  std::string method;
  double param = 0.0;
  // Averages over all steps; step 0 contributes zero changeout.
  double changeout = 0.0;
  double fit = 0.0;
  double realized = 0.0;
  std::vector<StepTrace> trace;
};

struct ExperimentReport {
  std::string kind;  // "pps" or "topk"
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  // method,param,changeout,fit,realized_changeout
  void write_csv(std::ostream& out) const;
  // Rows with per-step traces and notes.
  void write_json(std::ostream& out) const;
  std::vector<const ReportRow*> method_rows(const std::string& method) const;
};

enum class SampleMode { kSubsample, kPrn };

struct PpsExperimentConfig {
  double k = 1.0;
  // Stable method changeout budgets; values above the step's maximum are
  // clamped to it.
  std::vector<double> d_values;
  // EWMA mean lifetimes.
  std::vector<double> m_values;
  SampleMode mode = SampleMode::kSubsample;
  std::uint64_t seed = 0x5eed;
};

// Fit per step is sqrt(sum over present keys of x^2 (1/q - 1)), the
// Horvitz-Thompson standard error of the total.
ExperimentReport run_pps_experiment(const TimeSeriesDataset& data,
                                    const PpsExperimentConfig& config);

struct TopKExperimentConfig {
  std::size_t k = 1;
  std::vector<double> a_values;  // may include +inf
  std::vector<double> m_values;
};

// Fit per step is the deficit top-k value(x_t) - value(S_t, x_t).
ExperimentReport run_topk_experiment(const TimeSeriesDataset& data,
                                     const TopKExperimentConfig& config);

// Fraction of the other method's rows at which this method's fit,
// interpolated linearly in changeout (clamped at the ends), is no worse.
double pareto_fraction(const ExperimentReport& report, const std::string& method,
                       const std::string& other, double rel_tol = 1e-9);

struct SynthSpec {
  // zipf-stationary, random-increment or drifting-zipf.
  std::string generator = "drifting-zipf";
  std::size_t n = 100;
  std::size_t steps = 10;
  double zipf_s = 1.0;
  double scale = 1000.0;
  // Lognormal sigma of per-step multiplicative noise (zipf generators).
  double noise = 0.1;
  // drifting-zipf: adjacent rank transpositions per step, as a fraction of n.
  double drift = 0.05;
  // random-increment: 2 * inc_k entries get +increment per step.
  std::size_t inc_k = 5;
  double increment = 1.0;
};

// Reproducible from the seed. InputError for an unknown generator.
TimeSeriesDataset synth_dataset(const SynthSpec& spec, std::uint64_t seed);

// Ranks (1 = heaviest) underlying drifting-zipf steps, for tests.
std::vector<std::vector<std::size_t>> drifting_zipf_ranks(const SynthSpec& spec,
                                                          std::uint64_t seed);

}  // namespace stablex
