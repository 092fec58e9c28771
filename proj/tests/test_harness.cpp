/*
 * Copyright 2026 The icalloc Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdlib>
#include <set>

#include "icalloc/harness.hpp"

using namespace icalloc;

namespace {

bool same(const MonteCarloSummary& a, const MonteCarloSummary& b) {
  return a.deltas == b.deltas && a.successes == b.successes && a.mean_delta == b.mean_delta;
}

}  // namespace

TEST(MonteCarlo, BalanceHoldsWithHighProbability) {
  const MonteCarloSummary s = monte_carlo_delta(200, 2, 10, 0.5, 200, 1);
  EXPECT_EQ(s.trials, 200u);
  EXPECT_GE(s.successes, 193u);
  ASSERT_TRUE(s.phi_min.has_value());
  EXPECT_NEAR(*s.phi_min, 0.403, 5e-4);
  EXPECT_FALSE(s.vacuous);
  EXPECT_TRUE(s.guarantee_applies);
  EXPECT_LE(s.min_delta, s.mean_delta);
  EXPECT_LE(s.mean_delta, s.max_delta);
}

TEST(MonteCarlo, FullDensityHasNoRandomness) {
  const MonteCarloSummary s = monte_carlo_delta(64, 2, 12, 1.0, 5, 3);
  EXPECT_EQ(s.fraction_delta_le_5, 1.0);
  EXPECT_EQ(s.min_delta, s.max_delta);
  EXPECT_LE(s.max_delta, 4.0);
}

TEST(MonteCarlo, VacuousThreshold) {
  const MonteCarloSummary s = monte_carlo_delta(100, 2, 10, 0.9, 20, 3);
  EXPECT_TRUE(s.vacuous);
  EXPECT_FALSE(s.guarantee_applies);
  ASSERT_TRUE(s.phi_min.has_value());
  EXPECT_NEAR(*s.phi_min, 1.523, 5e-4);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const MonteCarloSummary many = monte_carlo_delta(80, 2, 9, 0.4, 40, 17);
  ::setenv("IC_ALLOC_THREADS", "1", 1);
  const MonteCarloSummary one = monte_carlo_delta(80, 2, 9, 0.4, 40, 17);
  ::unsetenv("IC_ALLOC_THREADS");
  EXPECT_TRUE(same(many, one));
  EXPECT_FALSE(same(many, monte_carlo_delta(80, 2, 9, 0.4, 40, 18)));
}

TEST(MonteCarlo, Errors) {
  EXPECT_THROW(monte_carlo_delta(80, 2, 9, 0.4, 0, 1), Error);
  try {
    monte_carlo_delta(11, 2, 28, 0.5, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedParameters);
  }
}

TEST(Sweep, EmptyGrid) { EXPECT_TRUE(sweep(GridSpec{}).empty()); }

TEST(Sweep, SinglePointMatchesWorkedExample) {
  const auto records = sweep(GridSpec{{6}, {2}, {3}, {1.0}, {0}});
  ASSERT_EQ(records.size(), 1u);
  const SweepRecord& r = records.front();
  EXPECT_EQ(r.design_case, "divisible");
  EXPECT_EQ(r.k, 3u);
  EXPECT_EQ(r.s_or_s0, 2u);
  EXPECT_EQ(r.g, 0u);
  EXPECT_EQ(r.pi, 4u);
  EXPECT_NEAR(r.pi_lb, 3.4641016151377544, 1e-12);
  EXPECT_DOUBLE_EQ(r.delta, 1.2);
  EXPECT_DOUBLE_EQ(r.delta_x, 1.2);
  EXPECT_DOUBLE_EQ(r.arf, 2.0);
  EXPECT_TRUE(r.bounds_ok);
}

TEST(Sweep, CommunicationScalesLinearlyInN) {
  const auto records = sweep(GridSpec{{60, 120, 240}, {2}, {15}, {1.0}, {0}});
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].pi, 20u);
  EXPECT_EQ(records[1].pi, 40u);
  EXPECT_EQ(records[2].pi, 80u);
  for (const auto& r : records) EXPECT_TRUE(r.bounds_ok);
}

TEST(Sweep, UnsupportedPointsAreSkipped) {
  const auto records = sweep(GridSpec{{11}, {2}, {10, 28}, {1.0}, {0}});
  ASSERT_EQ(records.size(), 2u);
  EXPECT_FALSE(records[0].skipped());
  EXPECT_TRUE(records[1].skipped());
  EXPECT_EQ(records[1].design_case, "skipped");
  EXPECT_NE(records[1].skip_reason.find("UnsupportedParameters"), std::string::npos);
}

TEST(Sweep, ThinnedPointsAreReproducible) {
  const GridSpec grid{{40, 64}, {2, 3}, {4, 10}, {0.5, 1.0}, {1, 2}};
  const auto a = sweep(grid);
  const auto b = sweep(grid);
  ASSERT_EQ(a.size(), 32u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].pi, b[i].pi);
    EXPECT_EQ(a[i].delta_x, b[i].delta_x);
    EXPECT_TRUE(a[i].bounds_ok);
  }
}

TEST(Simulate, ThreeRoundsAreBlind) {
  const std::vector<ThinningSpec> rounds{{0.3, 1, kGeneratorId}, {0.6, 2, kGeneratorId}, {1.0, 3, kGeneratorId}};
  const SimulationResult result = simulate_rounds(60, 2, 6, rounds);
  ASSERT_EQ(result.rounds.size(), 3u);
  EXPECT_TRUE(result.placement_identical);
  EXPECT_TRUE(result.feasible);
  EXPECT_TRUE(result.blind());
  std::set<double> deltas;
  std::set<std::uint64_t> placement_pi;
  for (const auto& r : result.rounds) {
    deltas.insert(r.report.delta);
    placement_pi.insert(r.report.pi_placement);
  }
  EXPECT_EQ(deltas.size(), 3u);
  EXPECT_EQ(placement_pi.size(), 1u);
}

TEST(Simulate, SingleFullRoundEqualsPlainRun) {
  const SimulationResult result = simulate_rounds(20, 3, 7, {{1.0, 0, kGeneratorId}});
  const FinalPartition plain = refine(build_base_partition(20, 3, 7), TaskSet::full(20, 3));
  EXPECT_EQ(result.rounds.front().partition.partition, plain.partition);
}

TEST(Simulate, RepeatedSpecGivesIdenticalReports) {
  const ThinningSpec spec{0.5, 8, kGeneratorId};
  const SimulationResult result = simulate_rounds(30, 2, 5, {spec, spec});
  EXPECT_EQ(result.rounds[0].partition, result.rounds[1].partition);
  EXPECT_EQ(result.rounds[0].report.delta, result.rounds[1].report.delta);
  EXPECT_THROW(simulate_rounds(30, 2, 5, {}), Error);
}
