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

#ifndef ICALLOC_METRICS_HPP
#define ICALLOC_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "icalloc/counting.hpp"
#include "icalloc/design.hpp"
#include "icalloc/params.hpp"
#include "icalloc/partition.hpp"

namespace icalloc {

/// Slack on comparisons between real-valued quantities.
inline constexpr double kRealTolerance = 1e-9;

/// pi: the largest per-group footprint |alpha(Phi_b)|; 0 when every group is empty.
inline std::uint64_t pi_of(const Partition& p) {
  std::uint64_t best = 0;
  for (const auto& g : p.groups) best = std::max<std::uint64_t>(best, footprint(g).size());
  return best;
}

/// Largest number of files actually placed at one worker.
inline std::uint64_t placement_pi(const Partition& p) {
  std::uint64_t best = 0;
  for (const auto& files : p.placement) best = std::max<std::uint64_t>(best, files.size());
  return best;
}

/// delta: max_b |Phi_b| / ceil(|X| / N); 0 for an empty task set.
inline double delta_of(const Partition& p) {
  const std::uint64_t total = p.task_count();
  if (total == 0 || p.workers() == 0) return 0.0;
  std::uint64_t largest = 0;
  for (const auto& g : p.groups) largest = std::max<std::uint64_t>(largest, g.size());
  const std::uint64_t ideal = (total + p.workers() - 1) / p.workers();
  return static_cast<double>(largest) / static_cast<double>(ideal);
}

/// Sum over groups of |alpha(Phi_b)|; empty groups contribute 0.
inline std::uint64_t footprint_sum(const Partition& p) {
  std::uint64_t total = 0;
  for (const auto& g : p.groups) total += footprint(g).size();
  return total;
}

/// Average replication factor (1/n) sum_b |alpha(Phi_b)|.
inline double arf_of(const Partition& p) {
  return p.n == 0 ? 0.0 : static_cast<double>(footprint_sum(p)) / static_cast<double>(p.n);
}

/// One guarantee checked against a partition.
struct PromisedBound {
  std::string name;
  double bound = 0.0;
  double achieved = 0.0;
  bool applicable = false;
  bool satisfied = true;
  bool probabilistic = false;  // holds only with high probability over thinning
};

struct CostReport {
  std::uint64_t pi = 0;            // max_b |alpha(Phi_b)|
  std::uint64_t pi_placement = 0;  // max_b files held by worker b
  double delta = 0.0;              // of the task groups
  double base_delta = 0.0;         // of the unrefined base partition (IC only)
  double arf = 0.0;
  double phi = 1.0;
  PiLowerBound pi_lb{0.0, 0};
  double gap = 0.0;                // pi / pi_lb
  std::vector<PromisedBound> promised;

  /// Conjunction over every applicable deterministic bound.
  bool bounds_ok() const {
    return std::all_of(promised.begin(), promised.end(),
                       [](const PromisedBound& b) { return !b.applicable || b.probabilistic || b.satisfied; });
  }

  const PromisedBound* find(const std::string& name) const {
    for (const auto& b : promised) {
      if (b.name == name) return &b;
    }
    return nullptr;
  }
};

namespace detail {

inline PromisedBound at_most(std::string name, double achieved, double bound, bool applicable) {
  return {std::move(name), bound, achieved, applicable, achieved <= bound + kRealTolerance, false};
}

inline void add_generic_bounds(CostReport& report, const Partition& p) {
  const std::uint64_t tasks = p.task_count();
  const double workers = static_cast<double>(p.workers());
  if (tasks > 0 && p.n >= p.d && p.d >= 1) {
    const double density = static_cast<double>(tasks) / binomial(p.n, p.d).convert_to<double>();
    const PiLowerBound converse = pi_lower_bound(p.n, p.d, p.workers(), std::min(1.0, density));
    PromisedBound b{"converse_pi_ge_ceil_lb", static_cast<double>(converse.integer_bound),
                    static_cast<double>(report.pi), true, report.pi >= converse.integer_bound, false};
    report.promised.push_back(b);
  }
  report.promised.push_back(at_most("arf_le_N_pi_over_n", report.arf,
                                    p.n == 0 ? 0.0 : workers * static_cast<double>(report.pi) / p.n, p.n > 0));
}

}  // namespace detail

/// Metrics and generic bounds for any partition.
inline CostReport evaluate(const Partition& p, double phi = 1.0) {
  CostReport report;
  report.pi = pi_of(p);
  report.pi_placement = placement_pi(p);
  report.delta = delta_of(p);
  report.arf = arf_of(p);
  report.phi = phi;
  if (phi > 0.0 && phi <= 1.0 && p.workers() > 0 && p.n >= p.d && p.d >= 1) {
    report.pi_lb = pi_lower_bound(p.n, p.d, p.workers(), phi);
    report.gap = static_cast<double>(report.pi) / report.pi_lb.value;
  }
  detail::add_generic_bounds(report, p);
  return report;
}

/// Metrics plus every construction guarantee that applies to these parameters.
/// Pre-extension sizes and the base delta are recomputed in closed form.
inline CostReport full_report(const Partition& p, const ICParameters& params, double phi = 1.0) {
  CostReport report = evaluate(p, phi);
  const std::uint32_t n = params.n;
  const std::uint32_t d = params.d;
  const double workers = static_cast<double>(params.workers);
  const Assigner assigner(params);

  std::vector<std::uint64_t> pre_sizes(params.base_groups);
  std::uint64_t largest_base = 0;
  for (std::uint64_t b = 1; b <= params.base_groups; ++b) {
    pre_sizes[b - 1] = assigner.pre_extension_size(b);
    const std::uint64_t parts = params.parts_of(b);
    largest_base = std::max(largest_base, (pre_sizes[b - 1] + parts - 1) / parts);
  }
  const std::uint64_t total = binomial_u64(n, d);
  report.base_delta = static_cast<double>(largest_base) / static_cast<double>((total + params.workers - 1) / params.workers);

  const double pi_placement = static_cast<double>(report.pi_placement);
  if (params.design_case == DesignCase::Divisible) {
    const double target = static_cast<double>(params.s) * d;
    report.promised.push_back({"pi_eq_s_d", target, pi_placement, true, report.pi_placement == params.s * d, false});
  } else {
    report.promised.push_back(
        detail::at_most("pi_le_s0_d_plus_g", pi_placement, static_cast<double>(params.s0) * d + params.g, true));
  }

  // Pre-extension group sizes around C(n,d)/N'.
  const double slack = params.design_case == DesignCase::Divisible ? std::pow(2.0, d) - d : std::pow(2.0, d + 1) - 2.0 * d;
  const double mean = static_cast<double>(total) / static_cast<double>(params.base_groups);
  double worst = 0.0;
  for (std::uint64_t size : pre_sizes) worst = std::max(worst, std::abs(static_cast<double>(size) - mean));
  report.promised.push_back(detail::at_most("pre_extension_size_deviation", worst, slack, true));

  if (!params.capped) {
    const double ratio = workers / static_cast<double>(params.base_groups);
    report.promised.push_back({"N_over_Nprime_lt_d_plus_1", d + 1.0, ratio, true, ratio < d + 1.0, false});
  }

  const bool balanced_range = within_balance_range(n, d, params.workers);
  report.promised.push_back(detail::at_most("base_delta_le_4", report.base_delta, 4.0, balanced_range));
  report.promised.push_back(detail::at_most(
      "pi_le_4e_n_over_N_root_d", pi_placement,
      4.0 * std::numbers::e * n / std::pow(workers, 1.0 / d), balanced_range));

  if (d == 2 && p.n > 0) {
    // Exact integer forms of ARF < sqrt(2N) and ARF <= 2 sqrt(2N).
    const BigCount sum = footprint_sum(p);
    const BigCount lhs = sum * sum;
    const BigCount nn = BigCount(n) * n;
    if (params.design_case == DesignCase::Divisible) {
      report.promised.push_back({"arf_lt_sqrt_2N", std::sqrt(2.0 * workers), report.arf, true,
                                 lhs < 2 * BigCount(params.workers) * nn, false});
    } else {
      report.promised.push_back({"arf_le_2_sqrt_2N", 2.0 * std::sqrt(2.0 * workers), report.arf, params.workers >= 3,
                                 lhs <= 8 * BigCount(params.workers) * nn, false});
    }
  }

  // High-probability balance of the refined groups.
  bool whp_applies = 32ull * d <= n && balanced_range && p.task_count() > 0;
  if (whp_applies) {
    try {
      const PhiMin pm = phi_min(n, d, params.workers);
      whp_applies = !pm.vacuous && phi >= pm.value;
    } catch (const Error&) {
      whp_applies = false;
    }
  }
  PromisedBound hp = detail::at_most("delta_X_le_5_whp", report.delta, 5.0, whp_applies);
  hp.probabilistic = true;
  report.promised.push_back(hp);
  return report;
}

inline CostReport full_report(const FinalPartition& p, double phi) { return full_report(p.partition, p.params, phi); }

}  // namespace icalloc

#endif  // ICALLOC_METRICS_HPP
