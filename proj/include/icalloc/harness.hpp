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

#ifndef ICALLOC_HARNESS_HPP
#define ICALLOC_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "icalloc/baselines.hpp"
#include "icalloc/design.hpp"
#include "icalloc/metrics.hpp"
#include "icalloc/random.hpp"

namespace icalloc {

/// Threads to use: hardware concurrency, capped by IC_ALLOC_THREADS when set.
inline unsigned thread_budget() {
  unsigned budget = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("IC_ALLOC_THREADS")) {
    const long v = std::strtol(cap, nullptr, 10);
    if (v >= 1) budget = std::min<unsigned>(budget, static_cast<unsigned>(v));
  }
  return budget;
}

/// Runs body(i) for i in [0, count). Each index writes only its own output slot,
/// so results do not depend on the schedule.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(thread_budget(), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------- Monte Carlo

struct MonteCarloSummary {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // trials with delta_X <= 5
  double fraction_delta_le_5 = 0.0;
  double min_delta = 0.0;
  double mean_delta = 0.0;
  double max_delta = 0.0;
  std::optional<double> phi_min;  // absent when its denominator is not positive
  bool vacuous = true;
  bool guarantee_applies = false;  // phi >= phi_min, n >= 32d and N in range
  std::vector<double> deltas;     // per trial, in trial order
};

inline MonteCarloSummary monte_carlo_delta(std::uint32_t n, std::uint32_t d, std::uint64_t workers, double phi,
                                           std::uint64_t trials, std::uint64_t master_seed) {
  if (trials < 1) fail(Errc::InvalidDimensions, "need at least one trial");
  check_phi(phi);
  const BasePartition base = build_base_partition(n, d, workers);

  MonteCarloSummary out;
  out.trials = trials;
  out.deltas.assign(trials, 0.0);
  parallel_for(trials, [&](std::size_t i) {
    const TaskSet tasks = thin(n, d, {phi, derive_seed(master_seed, i), kGeneratorId});
    out.deltas[i] = delta_of(refine(base, tasks).partition);
  });

  double sum = 0.0;
  out.min_delta = out.deltas.front();
  out.max_delta = out.deltas.front();
  for (double v : out.deltas) {
    if (v <= 5.0 + kRealTolerance) ++out.successes;
    sum += v;
    out.min_delta = std::min(out.min_delta, v);
    out.max_delta = std::max(out.max_delta, v);
  }
  out.mean_delta = sum / static_cast<double>(trials);
  out.fraction_delta_le_5 = static_cast<double>(out.successes) / static_cast<double>(trials);
  try {
    const PhiMin pm = phi_min(n, d, workers);
    out.phi_min = pm.value;
    out.vacuous = pm.vacuous;
  } catch (const Error&) {
    out.vacuous = true;
  }
  out.guarantee_applies = !out.vacuous && out.phi_min && phi >= *out.phi_min && within_balance_range(n, d, workers);
  return out;
}

// ---------------------------------------------------------------- sweep

struct GridSpec {
  std::vector<std::uint32_t> n;
  std::vector<std::uint32_t> d;
  std::vector<std::uint64_t> workers;
  std::vector<double> phi{1.0};
  std::vector<std::uint64_t> seeds{0};
};

struct SweepRecord {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t workers = 0;
  double phi = 1.0;
  std::uint64_t seed = 0;
  std::string design_case;     // "divisible", "non_divisible" or "skipped"
  std::uint64_t k = 0;
  std::uint64_t s_or_s0 = 0;
  std::uint64_t g = 0;
  std::uint64_t pi = 0;
  double pi_lb = 0.0;
  double gap = 0.0;
  double delta = 0.0;          // base partition on all of A_{n,d}
  double delta_x = 0.0;        // refined on X
  double arf = 0.0;
  bool bounds_ok = false;
  std::string skip_reason;

  bool skipped() const { return !skip_reason.empty(); }
};

inline SweepRecord sweep_point(std::uint32_t n, std::uint32_t d, std::uint64_t workers, double phi,
                               std::uint64_t seed) {
  SweepRecord rec;
  rec.n = n;
  rec.d = d;
  rec.workers = workers;
  rec.phi = phi;
  rec.seed = seed;
  try {
    check_phi(phi);
    const BasePartition base = build_base_partition(n, d, workers);
    const ICParameters& params = base.params;
    const TaskSet tasks = phi >= 1.0 ? TaskSet::full(n, d) : thin(n, d, {phi, seed, kGeneratorId});
    const FinalPartition fin = refine(base, tasks);
    const CostReport report = full_report(fin, phi);
    rec.design_case = std::string(to_string(params.design_case));
    rec.k = params.k;
    rec.s_or_s0 = params.design_case == DesignCase::Divisible ? params.s : params.s0;
    rec.g = params.g;
    rec.pi = report.pi;
    rec.pi_lb = report.pi_lb.value;
    rec.gap = report.gap;
    rec.delta = report.base_delta;
    rec.delta_x = report.delta;
    rec.arf = report.arf;
    rec.bounds_ok = report.bounds_ok();
  } catch (const Error& e) {
    rec.design_case = "skipped";
    rec.skip_reason = e.what();
  }
  return rec;
}

/// One record per grid point, in the order n, d, N, phi, seed (outermost first).
inline std::vector<SweepRecord> sweep(const GridSpec& grid) {
  struct Point {
    std::uint32_t n, d;
    std::uint64_t workers;
    double phi;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (auto n : grid.n)
    for (auto d : grid.d)
      for (auto w : grid.workers)
        for (auto phi : grid.phi)
          for (auto seed : grid.seeds) points.push_back({n, d, w, phi, seed});
  std::vector<SweepRecord> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Point& p = points[i];
    out[i] = sweep_point(p.n, p.d, p.workers, p.phi, p.seed);
  });
  return out;
}

// ---------------------------------------------------------------- rounds

struct RoundResult {
  ThinningSpec spec;
  FinalPartition partition;
  CostReport report;
};

struct SimulationResult {
  std::vector<RoundResult> rounds;
  bool placement_identical = true;
  bool feasible = true;

  bool blind() const { return placement_identical && feasible; }
};

/// Builds the base partition once and refines a fresh thinned X each round.
inline SimulationResult simulate_rounds(std::uint32_t n, std::uint32_t d, std::uint64_t workers,
                                        const std::vector<ThinningSpec>& rounds) {
  if (rounds.empty()) fail(Errc::InvalidDimensions, "need at least one round");
  const BasePartition base = build_base_partition(n, d, workers);
  SimulationResult out;
  for (const ThinningSpec& spec : rounds) {
    FinalPartition fin = refine(base, thin(n, d, spec));
    CostReport report = full_report(fin, spec.phi);
    if (!out.rounds.empty() && fin.partition.placement != out.rounds.front().partition.partition.placement) {
      out.placement_identical = false;
    }
    for (std::size_t b = 0; b < fin.partition.workers(); ++b) {
      if (!is_subset(footprint(fin.partition.groups[b]), fin.partition.placement[b])) out.feasible = false;
    }
    out.rounds.push_back({spec, std::move(fin), std::move(report)});
  }
  return out;
}

}  // namespace icalloc

#endif  // ICALLOC_HARNESS_HPP
