#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "stablex/harness.hpp"
#include "stablex/pps.hpp"

namespace stablex {
namespace {

TimeSeriesDataset small_dataset(std::vector<std::vector<double>> rows) {
  TimeSeriesDataset d;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    d.keys.push_back(i);
    d.names.push_back("k" + std::to_string(i));
  }
  d.weights = std::move(rows);
  return d;
}

TEST(Ewma, NoHistoryAndConstantSeries) {
  TimeSeriesDataset d = small_dataset({{4, 0, 1}, {8, 2, 1}, {2, 2, 1}});
  EXPECT_EQ(ewma_weights(d, 1.0), d.weights);
  TimeSeriesDataset flat = small_dataset({{3, 5}, {3, 5}, {3, 5}});
  auto s = ewma_weights(flat, 7.0);
  for (const auto& row : s) {
    EXPECT_DOUBLE_EQ(row[0], 3.0);
    EXPECT_DOUBLE_EQ(row[1], 5.0);
  }
  EXPECT_THROW(ewma_weights(d, 0.5), DomainError);
}

TEST(Ewma, TwoStepHandValue) {
  // beta = 1/2: 0.5 * 8 + 0.5 * 4 = 6.
  TimeSeriesDataset d = small_dataset({{4}, {8}});
  EXPECT_DOUBLE_EQ(ewma_weights(d, 2.0)[1][0], 6.0);
}

TEST(Dataset, CsvRoundTripAndErrors) {
  std::istringstream in("step,key,weight\n0,a,1\n1,b,2\n0,b,3\n");
  TimeSeriesDataset d = read_dataset_csv(in);
  ASSERT_EQ(d.steps(), 2u);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.weights[1][0], 0.0);
  EXPECT_EQ(d.weights[0][1], 3.0);
  std::ostringstream out;
  write_dataset_csv(out, d);
  std::istringstream back(out.str());
  TimeSeriesDataset d2 = read_dataset_csv(back);
  EXPECT_EQ(d2.weights, d.weights);
  std::istringstream neg("step,key,weight\n0,a,-1\n");
  EXPECT_THROW(read_dataset_csv(neg), InputError);
  std::istringstream dup("step,key,weight\n0,a,1\n0,a,2\n");
  EXPECT_THROW(read_dataset_csv(dup), InputError);
  std::istringstream empty("step,key,weight\n");
  EXPECT_THROW(read_dataset_csv(empty), InputError);
}

TEST(Synth, DeterministicBytes) {
  for (const char* gen : {"zipf-stationary", "drifting-zipf", "random-increment"}) {
    SynthSpec spec;
    spec.generator = gen;
    std::ostringstream a, b, c;
    write_dataset_csv(a, synth_dataset(spec, 42));
    write_dataset_csv(b, synth_dataset(spec, 42));
    write_dataset_csv(c, synth_dataset(spec, 43));
    EXPECT_EQ(a.str(), b.str()) << gen;
    EXPECT_NE(a.str(), c.str()) << gen;
  }
  SynthSpec bad;
  bad.generator = "nope";
  EXPECT_THROW(synth_dataset(bad, 1), InputError);
}

TEST(Synth, RandomIncrementTouchesExactlyTwoK) {
  SynthSpec spec;
  spec.generator = "random-increment";
  spec.n = 50;
  spec.steps = 20;
  spec.inc_k = 6;
  TimeSeriesDataset d = synth_dataset(spec, 3);
  for (std::size_t t = 1; t < d.steps(); ++t) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      double diff = d.weights[t][i] - d.weights[t - 1][i];
      EXPECT_TRUE(diff == 0.0 || diff == spec.increment);
      changed += diff != 0.0;
    }
    EXPECT_EQ(changed, 2 * spec.inc_k);
  }
}

TEST(Synth, DriftRateAsConfigured) {
  SynthSpec spec;
  spec.n = 200;
  spec.steps = 30;
  spec.drift = 0.05;
  auto ranks = drifting_zipf_ranks(spec, 9);
  std::size_t swaps = 10;
  double total = 0.0;
  for (std::size_t t = 1; t < ranks.size(); ++t) {
    // Kendall distance between consecutive rankings.
    std::size_t inv = 0;
    for (std::size_t i = 0; i < spec.n; ++i) {
      for (std::size_t j = i + 1; j < spec.n; ++j) {
        bool before = ranks[t - 1][i] < ranks[t - 1][j];
        bool after = ranks[t][i] < ranks[t][j];
        inv += before != after;
      }
    }
    EXPECT_LE(inv, swaps);
    EXPECT_EQ(inv % 2, swaps % 2);
    total += static_cast<double>(inv);
  }
  EXPECT_GE(total / static_cast<double>(ranks.size() - 1), 0.7 * static_cast<double>(swaps));
}

TEST(PpsExperiment, BudgetEndpoints) {
  TimeSeriesDataset d = small_dataset({{2, 4, 1, 5, 6, 3}, {6, 1, 5, 2, 2, 4}});
  PpsExperimentConfig c;
  c.k = 2;
  c.d_values = {0.0, 100.0};
  ExperimentReport r = run_pps_experiment(d, c);
  ASSERT_EQ(r.rows.size(), 2u);
  PpsDistribution p0 = pps_probabilities(d.step(0), 2).dist;
  PpsDistribution p1 = pps_probabilities(d.step(1), 2).dist;
  EXPECT_NEAR(r.rows[0].trace[1].fit, std::sqrt(ht_variance(d.step(1), p0)), 1e-9);
  EXPECT_EQ(r.rows[0].trace[1].changeout, 0.0);
  EXPECT_NEAR(r.rows[1].trace[1].fit, std::sqrt(ht_variance(d.step(1), p1)), 1e-9);
  EXPECT_NEAR(r.rows[1].trace[1].changeout, l1_distance(p0, p1), 1e-9);
  // Averages run over both steps, step 0 contributing no changeout.
  EXPECT_NEAR(r.rows[1].changeout, l1_distance(p0, p1) / 2, 1e-9);
}

TEST(PpsExperiment, StepChangeoutWithinBudget) {
  SynthSpec spec;
  spec.n = 300;
  spec.steps = 12;
  spec.drift = 0.2;
  TimeSeriesDataset d = synth_dataset(spec, 5);
  PpsExperimentConfig c;
  c.k = 30;
  c.d_values = {0.5, 2.0, 8.0};
  c.m_values = {1, 4};
  ExperimentReport r = run_pps_experiment(d, c);
  for (const ReportRow* row : r.method_rows("stable")) {
    for (const StepTrace& s : row->trace) EXPECT_LE(s.changeout, row->param + 1e-9);
  }
  EXPECT_EQ(r.method_rows("ewma").size(), 2u);
}

TEST(PpsExperiment, DeterministicReport) {
  SynthSpec spec;
  spec.n = 200;
  spec.steps = 8;
  TimeSeriesDataset d = synth_dataset(spec, 1);
  for (SampleMode mode : {SampleMode::kSubsample, SampleMode::kPrn}) {
    PpsExperimentConfig c;
    c.k = 20;
    c.d_values = {0, 1, 4};
    c.m_values = {1, 2, 8};
    c.mode = mode;
    c.seed = 77;
    std::ostringstream a, b;
    run_pps_experiment(d, c).write_csv(a);
    run_pps_experiment(d, c).write_csv(b);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST(PpsExperiment, ClampsKWithNote) {
  TimeSeriesDataset d = small_dataset({{1, 2, 0}, {1, 2, 3}});
  PpsExperimentConfig c;
  c.k = 5;
  c.d_values = {1};
  ExperimentReport r = run_pps_experiment(d, c);
  ASSERT_FALSE(r.notes.empty());
  EXPECT_NE(r.notes[0].find("clamped"), std::string::npos);
}

TEST(TopKExperiment, PriceEnds) {
  SynthSpec spec;
  spec.generator = "random-increment";
  spec.n = 60;
  spec.steps = 30;
  spec.inc_k = 5;
  TimeSeriesDataset d = synth_dataset(spec, 8);
  TopKExperimentConfig c;
  c.k = 5;
  c.a_values = {0.0, kInfinity};
  c.m_values = {1.0};
  ExperimentReport r = run_topk_experiment(d, c);
  const ReportRow& zero = r.rows[0];
  const ReportRow& frozen = r.rows[1];
  for (const StepTrace& s : zero.trace) EXPECT_EQ(s.fit, 0.0);
  for (const StepTrace& s : frozen.trace) EXPECT_EQ(s.changeout, 0.0);
  // The EWMA row with m = 1 is the raw top-k churn, which a = 0 matches
  // except where ties keep the previous set.
  EXPECT_LE(zero.changeout, r.rows[2].changeout + 1e-12);
}

TEST(Report, CsvAndJson) {
  TimeSeriesDataset d = small_dataset({{2, 4, 1}, {1, 4, 2}});
  TopKExperimentConfig c;
  c.k = 1;
  c.a_values = {0.5};
  ExperimentReport r = run_topk_experiment(d, c);
  std::ostringstream csv, js;
  r.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "method,param,changeout,fit,realized_changeout");
  r.write_json(js);
  nlohmann::json j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j["kind"], "topk");
  EXPECT_EQ(j["rows"][0]["trace"].size(), 2u);
}

TEST(Pareto, Fraction) {
  ExperimentReport r;
  r.rows = {{"stable", 0, 0.0, 10.0, 0, {}}, {"stable", 1, 2.0, 6.0, 0, {}},
            {"ewma", 1, 1.0, 9.0, 0, {}},   {"ewma", 2, 2.0, 5.0, 0, {}}};
  // Stable at changeout 1 interpolates to 8 <= 9; at 2 it is 6 > 5.
  EXPECT_DOUBLE_EQ(pareto_fraction(r, "stable", "ewma"), 0.5);
}

}  // namespace
}  // namespace stablex
