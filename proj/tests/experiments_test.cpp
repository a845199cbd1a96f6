// Copyright 2026 The qadlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qadlab/experiments.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace qadlab {
namespace {

std::string csv_of(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

TEST(QubitExample, ReproducesWorkedMatrices) {
  const QubitExampleReport r = run_qubit_example();
  ASSERT_EQ(r.rows.size(), 5u);
  EXPECT_NEAR(r.p0, 0.80, 1e-12);

  Matrix std_expected = Matrix::Zero(2, 2);
  std_expected(0, 0) = 1.0;
  EXPECT_LE((r.rows[0].estimate - std_expected).norm(), 1e-12);
  EXPECT_NEAR(r.rows[0].uhlmann, 0.80, 1e-10);
  EXPECT_EQ(r.rows[0].rank, 1);

  EXPECT_LE((r.rows[1].estimate - 0.5 * pauli::identity()).norm(), 1e-12);
  EXPECT_NEAR(r.rows[1].linear, 0.50, 1e-12);
  EXPECT_EQ(r.rows[1].rank, 2);

  EXPECT_LE((r.rows[2].estimate - std_expected).norm(), 1e-12);
  EXPECT_EQ(r.rows[2].rank, 1);

  Matrix h(2, 2);
  h << 3.0, 1.0, 1.0, 1.0;
  EXPECT_LE((r.rows[3].estimate - h / 4.0).norm(), 1e-12);
  EXPECT_NEAR(r.hadamard_eigenvalues(0), 0.146, 1e-3);
  EXPECT_NEAR(r.hadamard_eigenvalues(1), 0.854, 1e-3);
  EXPECT_EQ(r.rows[3].rank, 2);

  EXPECT_NEAR(r.rows[4].uhlmann, 1.0, 1e-10);
}

TEST(QubitExample, FidelityConventionAudit) {
  const QubitExampleReport r = run_qubit_example();
  EXPECT_NEAR(r.rows[3].uhlmann, r.hadamard_closed_form, 1e-10);
  // The published 0.91 matches neither convention; it is flagged, not asserted.
  EXPECT_FALSE(r.rows[3].uhlmann_matches_published);
  EXPECT_DOUBLE_EQ(r.rows[3].published_fidelity, 0.91);
  // The Pauli row's published value is the linear fidelity.
  EXPECT_FALSE(r.rows[1].uhlmann_matches_published);
  EXPECT_TRUE(r.rows[1].linear_matches_published);
  const std::string csv = csv_of(qubit_example_table(r));
  EXPECT_NE(csv.find("discrepancy"), std::string::npos);
  EXPECT_NE(csv.find("0.987202212043"), std::string::npos);
}

SweepConfig small_sweep(unsigned threads = 1) {
  SweepConfig c;
  c.dims = {2, 3, 5};
  c.trials = 25;
  c.seed = 99;
  c.threads = threads;
  return c;
}

TEST(QuditSweep, RecordInvariants) {
  const SweepConfig cfg = small_sweep();
  const SweepResult r = run_qudit_sweep(cfg);
  ASSERT_EQ(r.records.size(), 75u);
  for (const auto& rec : r.records) {
    for (double f : {rec.fidelity_standard, rec.fidelity_hw, rec.fidelity_matched,
                     rec.linear_fidelity_hw, rec.analytic_hw_fidelity}) {
      EXPECT_GE(f, 0.0);
      EXPECT_LE(f, 1.0);
    }
    EXPECT_NEAR(rec.fidelity_hw, rec.analytic_hw_fidelity, 1e-10);
    EXPECT_NEAR(rec.purity, 0.7, 0.01);
    EXPECT_NEAR(rec.kappa, 1.0 + 1.0 / rec.purity, 1e-12);
    EXPECT_NEAR(rec.linear_fidelity_hw, 1.0 / rec.d, 1e-12);

    // Rebuild the trial's state from its recorded seed: the standard
    // fidelity is the Born probability of the sampled outcome.
    Rng rng(rec.seed);
    const DensityMatrix rho =
        ginibre_with_purity({rec.d, cfg.target_purity, cfg.purity_tolerance, rec.seed}, rng)
            .state;
    const auto p = born_probabilities(rho, computational_povm(rec.d)).probabilities;
    EXPECT_NEAR(rec.fidelity_standard, p[static_cast<std::size_t>(rec.outcome)], 1e-10);
    double sq = 0.0;
    for (double x : p) sq += x * x;
    EXPECT_NEAR(rec.expected_standard_fidelity, sq, 1e-14);
  }
}

TEST(QuditSweep, SeedsFollowDimensionAndTrial) {
  const SweepResult r = run_qudit_sweep(small_sweep());
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.seed, derive_seed(99, {static_cast<std::uint64_t>(rec.d),
                                         static_cast<std::uint64_t>(rec.trial)}));
  }
  // A trial's record does not depend on which other dims were requested.
  SweepConfig only5 = small_sweep();
  only5.dims = {5};
  const SweepResult r5 = run_qudit_sweep(only5);
  EXPECT_EQ(csv_of(records_table({r.records.back()})),
            csv_of(records_table({r5.records.back()})));
}

TEST(QuditSweep, DeterministicAcrossThreadCounts) {
  const std::string one = csv_of(records_table(run_qudit_sweep(small_sweep(1)).records));
  const std::string again = csv_of(records_table(run_qudit_sweep(small_sweep(1)).records));
  const std::string four = csv_of(records_table(run_qudit_sweep(small_sweep(4)).records));
  EXPECT_EQ(one, again);
  EXPECT_EQ(one, four);
}

TEST(QuditSweep, CsvHeaderAndPrecision) {
  const SweepResult r = run_qudit_sweep(small_sweep());
  const std::string csv = csv_of(records_table(r.records));
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(header,
            "d,trial,seed,purity,kappa,outcome,fidelity_standard,fidelity_hw,"
            "fidelity_matched,linear_fidelity_hw,spectral_error_hw,"
            "spectral_error_matched,analytic_hw_fidelity,ginibre_rank,"
            "expected_standard_fidelity");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(0.5), "0.5");
  const Json j = table_to_json(records_table(r.records));
  ASSERT_EQ(j.size(), r.records.size());
  EXPECT_EQ(j[0]["seed"].get<std::uint64_t>(), r.records[0].seed);
  EXPECT_EQ(j[0].size(), SweepRecord::columns().size());
}

TEST(SweepSummary, OrderIndependentAndConsistent) {
  SweepResult r = run_qudit_sweep(small_sweep());
  const auto forward = summarize(r.records);
  std::vector<SweepRecord> reversed(r.records.rbegin(), r.records.rend());
  const auto backward = summarize(reversed);
  EXPECT_EQ(to_json(forward).dump(), to_json(backward).dump());

  ASSERT_EQ(forward.size(), 3u);
  for (const auto& s : forward) {
    EXPECT_EQ(s.n, 25u);
    for (const auto& [name, st] : s.metrics) {
      EXPECT_LE(st.min, st.mean) << name;
      EXPECT_LE(st.mean, st.max) << name;
      EXPECT_GE(st.std_error, 0.0);
    }
    EXPECT_DOUBLE_EQ(s.ratio_hw_over_standard,
                     s.at("fidelity_hw").mean / s.at("fidelity_standard").mean);
  }
}

TEST(MetricStats, HandOracle) {
  const MetricStats s = metric_stats({4.0, 1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.min, 1.0);
  EXPECT_DOUBLE_EQ(s.max, 4.0);
  // sample sd = sqrt(5/3); se = sd / 2
  EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(metric_stats({7.0}).std_error, 0.0);
}

TEST(Comparison, OnlyPublishedDimensions) {
  SweepConfig cfg = small_sweep();
  cfg.dims = {2, 6};
  const auto rows = compare_with_published(run_qudit_sweep(cfg).summaries);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].d, 2);
  EXPECT_DOUBLE_EQ(rows[0].published.standard, 0.514);
  EXPECT_DOUBLE_EQ(rows[0].standard_discrepancy, rows[0].standard - 0.514);
  EXPECT_EQ(published_fidelities().size(), 8u);
}

TEST(CapacityScan, AnchorsAndUniversalCurve) {
  CapacityConfig cfg;
  cfg.trials = 30;
  cfg.seed = 5;
  const auto recs = run_capacity_scan(cfg);
  ASSERT_EQ(recs.size(), 4u * 32u);
  int pure = 0;
  int mixed = 0;
  for (const auto& r : recs) {
    EXPECT_NEAR(r.kappa, 1.0 + 1.0 / r.purity, 1e-12);
    EXPECT_LE(r.renyi2_entropy, r.von_neumann_entropy + 1e-10);
    if (r.kind == "pure") {
      ++pure;
      EXPECT_NEAR(r.purity, 1.0, 1e-10);
      EXPECT_NEAR(r.kappa, 2.0, 1e-10);
      EXPECT_NEAR(r.von_neumann_entropy, 0.0, 1e-10);
    } else if (r.kind == "mixed") {
      ++mixed;
      EXPECT_NEAR(r.purity, 1.0 / r.d, 1e-10);
      EXPECT_NEAR(r.kappa, 1.0 + r.d, 1e-10);
      EXPECT_NEAR(r.von_neumann_entropy, std::log2(static_cast<double>(r.d)), 1e-10);
    } else {
      EXPECT_EQ(r.ginibre_rank, 1 + r.index % r.d);
    }
  }
  EXPECT_EQ(pure, 4);
  EXPECT_EQ(mixed, 4);
  cfg.threads = 3;
  EXPECT_EQ(csv_of(capacity_table(recs)), csv_of(capacity_table(run_capacity_scan(cfg))));
}

TEST(AdaptiveDemo, DiagonalQubitImproves) {
  AdaptiveDemoConfig cfg;
  cfg.d = 2;
  cfg.seed = 3;
  const AdaptiveDemoReport r = run_adaptive_demo(cfg);
  EXPECT_LE(r.pipeline.delta_q_after, r.pipeline.delta_q_before);
  EXPECT_EQ(r.pipeline.seed, 3u);
}

TEST(AdaptiveDemo, MaximallyMixedHasFlatSpectrum) {
  AdaptiveDemoConfig cfg;
  cfg.d = 3;
  cfg.state = "maximally_mixed";
  cfg.exact_probabilities = true;
  const AdaptiveDemoReport r = run_adaptive_demo(cfg);
  ASSERT_EQ(r.pipeline.lambda_spectrum.size(), 8u);
  for (double l : r.pipeline.lambda_spectrum) EXPECT_LE(std::abs(l), 1e-6);
}

TEST(AdaptiveDemo, JsonRoundTrip) {
  AdaptiveDemoConfig cfg;
  cfg.d = 3;
  cfg.state = "ginibre";
  cfg.n_coarse = 2000;
  const Json j = to_json(run_adaptive_demo(cfg));
  EXPECT_EQ(to_json(adaptive_demo_from_json(j)), j);
  EXPECT_EQ(to_json(adaptive_demo_from_json(Json::parse(j.dump()))).dump(), j.dump());
}

TEST(AdaptiveDemo, Validation) {
  AdaptiveDemoConfig cfg;
  cfg.d = 14;
  EXPECT_THROW(run_adaptive_demo(cfg), ValidationError);
  cfg.d = 3;
  cfg.state = "thermal";
  EXPECT_THROW(run_adaptive_demo(cfg), ValidationError);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(50, 4,
                            [](std::size_t i) {
                              if (i == 17) throw NumericalError("boom");
                            }),
               NumericalError);
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 3, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(SicAndMub, Checks) {
  const SicSearchResult s = run_sic_search(3, {64, 5000, 1e-10, 1, false});
  EXPECT_TRUE(s.fiducial.converged);
  EXPECT_LE(s.completeness, 1e-8);
  EXPECT_LE(s.max_overlap_error, 1e-5);
  const MubCheckResult m = run_mub_check(5);
  EXPECT_EQ(m.bases, 6u);
  EXPECT_LE(m.max_overlap_defect, 1e-10);
}

}  // namespace
}  // namespace qadlab
