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

#ifndef ICALLOC_ORACLE_HPP
#define ICALLOC_ORACLE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <vector>

#include "icalloc/combinatorics.hpp"
#include "icalloc/counting.hpp"
#include "icalloc/error.hpp"
#include "icalloc/partition.hpp"
#include "icalloc/task_set.hpp"

namespace icalloc {

inline constexpr std::uint64_t kDefaultEdgeCap = 16;
inline constexpr std::uint64_t kMaxOracleWorkers = 4;
inline constexpr std::uint64_t kMaxClassifyTuples = 1'000'000;

struct PiStar {
  std::uint64_t pi_star = 0;
  Partition witness;
};

namespace detail {

inline std::uint64_t file_mask(const DTuple& t) {
  std::uint64_t m = 0;
  for (FileIndex x : t) m |= std::uint64_t{1} << (x - 1);
  return m;
}

class PiStarSearch {
 public:
  PiStarSearch(std::vector<std::uint64_t> masks, std::uint64_t workers, std::uint64_t floor, std::uint64_t ceiling)
      : masks_(std::move(masks)), workers_(workers), floor_(floor), best_(ceiling + 1),
        groups_(workers, 0), choice_(masks_.size(), 0), best_choice_(masks_.size(), 0) {}

  std::uint64_t run() {
    descend(0, 0, 0);
    return best_;
  }

  const std::vector<std::uint32_t>& assignment() const { return best_choice_; }

 private:
  // Returns true once the floor is reached and the search can stop.
  bool descend(std::size_t i, std::uint32_t used, std::uint64_t current) {
    if (i == masks_.size()) {
      best_ = current;
      best_choice_ = choice_;
      return best_ <= floor_;
    }
    const std::uint32_t limit = static_cast<std::uint32_t>(std::min<std::uint64_t>(used + 1, workers_));
    for (std::uint32_t g = 0; g < limit; ++g) {
      const std::uint64_t before = groups_[g];
      const std::uint64_t after = before | masks_[i];
      const std::uint64_t load = std::max<std::uint64_t>(current, std::popcount(after));
      if (load >= best_) continue;
      groups_[g] = after;
      choice_[i] = g;
      const bool done = descend(i + 1, std::max(used, g + 1), load);
      groups_[g] = before;
      if (done) return true;
    }
    return false;
  }

  std::vector<std::uint64_t> masks_;
  std::uint64_t workers_;
  std::uint64_t floor_;
  std::uint64_t best_;
  std::vector<std::uint64_t> groups_;
  std::vector<std::uint32_t> choice_;
  std::vector<std::uint32_t> best_choice_;
};

}  // namespace detail

/// Exact minimum over all N-group partitions of X of the largest footprint.
/// With `use_floor` the search stops as soon as it meets ceil(pi_lb) at the density of X.
inline PiStar brute_force_pi_star(const TaskSet& tasks, std::uint64_t workers,
                                  std::uint64_t edge_cap = kDefaultEdgeCap, bool use_floor = true) {
  if (workers == 0) fail(Errc::InvalidDimensions, "N must be at least 1");
  if (workers > kMaxOracleWorkers) fail(Errc::InstanceTooLarge, "N exceeds " + std::to_string(kMaxOracleWorkers));
  if (tasks.size() > edge_cap) fail(Errc::InstanceTooLarge, "|X| exceeds edge cap " + std::to_string(edge_cap));
  if (tasks.n() > 64) fail(Errc::InstanceTooLarge, "n exceeds 64");

  PiStar out;
  out.witness.n = tasks.n();
  out.witness.d = tasks.d();
  out.witness.groups.assign(workers, {});
  if (tasks.empty()) {
    out.witness.placement.assign(workers, {});
    return out;
  }

  std::vector<std::uint64_t> masks;
  std::uint64_t all = 0;
  for (const DTuple& t : tasks.edges()) {
    masks.push_back(detail::file_mask(t));
    all |= masks.back();
  }
  std::uint64_t floor = tasks.d();
  if (use_floor) {
    const double density = static_cast<double>(tasks.size()) / binomial(tasks.n(), tasks.d()).convert_to<double>();
    floor = std::max<std::uint64_t>(floor, pi_lower_bound(tasks.n(), tasks.d(), workers, density).integer_bound);
  }
  detail::PiStarSearch search(std::move(masks), workers, floor, std::popcount(all));
  out.pi_star = search.run();
  const auto& choice = search.assignment();
  for (std::size_t i = 0; i < choice.size(); ++i) out.witness.groups[choice[i]].push_back(tasks.edges()[i]);
  out.witness = Partition::with_footprints(tasks.n(), tasks.d(), std::move(out.witness.groups));
  return out;
}

namespace detail {

inline void check_classify_size(std::uint32_t n, std::uint32_t d) {
  check_dimensions(n, d);
  if (binomial(n, d) > kMaxClassifyTuples) fail(Errc::InstanceTooLarge, "C(n,d) exceeds 10^6");
}

}  // namespace detail

/// Enumerates A_{n,d} and counts tuples by the number of size-s blocks they meet.
inline std::map<std::uint32_t, std::uint64_t> classify_by_support(std::uint32_t n, std::uint32_t d, std::uint32_t s) {
  if (s == 0 || n % s != 0) fail(Errc::InvalidDimensions, "s must divide n");
  detail::check_classify_size(n, d);
  std::map<std::uint32_t, std::uint64_t> table;
  for (const DTuple& t : LexTuples(n, d)) {
    std::uint32_t beta = 0;
    std::uint32_t last = 0;
    for (FileIndex x : t) {
      const std::uint32_t fam = (x - 1u) / s + 1u;
      if (fam != last) ++beta;
      last = fam;
    }
    ++table[beta];
  }
  return table;
}

/// Counts tuples of A_{n,d} holding at least one of the last g files, keyed by
/// how many of the (n-g)/s0 leading blocks they meet.
inline std::map<std::uint32_t, std::uint64_t> classify_excluded(std::uint32_t n, std::uint32_t d, std::uint32_t s0,
                                                               std::uint32_t g) {
  if (s0 == 0 || g > n || (n - g) % s0 != 0) fail(Errc::InvalidDimensions, "s0 must divide n - g");
  detail::check_classify_size(n, d);
  const std::uint32_t kept = n - g;
  std::map<std::uint32_t, std::uint64_t> table;
  for (const DTuple& t : LexTuples(n, d)) {
    if (t.back() <= kept) continue;
    std::uint32_t beta = 0;
    std::uint32_t last = 0;
    for (FileIndex x : t) {
      if (x > kept) break;
      const std::uint32_t fam = (x - 1u) / s0 + 1u;
      if (fam != last) ++beta;
      last = fam;
    }
    ++table[beta];
  }
  return table;
}

}  // namespace icalloc

#endif  // ICALLOC_ORACLE_HPP
