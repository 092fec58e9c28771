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

#ifndef ICALLOC_COUNTING_HPP
#define ICALLOC_COUNTING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "icalloc/combinatorics.hpp"

namespace icalloc {

// Every tuple-count below concerns f disjoint families of equal size s over
// [f*s], optionally extended by g excluded files that belong to no family.

inline std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) { return (a + b - 1) / b; }

/// Smallest support size of a d-tuple drawn from families of size s.
inline std::uint32_t common_beta_min(std::uint32_t s, std::uint32_t d) { return ceil_div(d, s); }

/// Smallest support size of an excluded tuple: ceil(max(0, d - g) / s0).
inline std::uint32_t excluded_beta_min(std::uint32_t s0, std::uint32_t g, std::uint32_t d) {
  return ceil_div(d > g ? d - g : 0, s0);
}

namespace detail {

/// Number of k-subsets of beta fixed families (size s each) hitting all of them.
inline BigCount surjective_count(std::uint64_t s, std::uint64_t beta, std::uint64_t k) {
  BigCount total = 0;
  for (std::uint64_t i = 0; i <= beta; ++i) {
    BigCount term = binomial(beta, i) * binomial(s * i, k);
    if ((beta - i) % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

}  // namespace detail

/// t_beta: d-tuples whose support is one fixed beta-set of families.
inline BigCount t_beta(std::uint32_t s, std::uint32_t f, std::uint32_t d, std::uint32_t beta) {
  if (s == 0 || beta < common_beta_min(s, d) || beta > d || beta > f) {
    fail(Errc::BetaOutOfRange, "beta=" + std::to_string(beta) + " outside [ceil(d/s), min(d,f)]");
  }
  return detail::surjective_count(s, beta, d);
}

/// |C_beta| = C(f, beta) * t_beta.
inline BigCount card_C_beta(std::uint32_t s, std::uint32_t f, std::uint32_t d, std::uint32_t beta) {
  return binomial(f, beta) * t_beta(s, f, d, beta);
}

/// m_beta: groups in C([f], d) containing a fixed beta-set.
inline BigCount m_beta(std::uint32_t f, std::uint32_t d, std::uint32_t beta) {
  if (beta > d || d > f) fail(Errc::BetaOutOfRange, "need beta <= d <= f");
  return binomial(f - beta, d - beta);
}

/// |R_{beta,I}|: excluded d-tuples (at least one of the g excluded files)
/// whose family support is exactly one fixed beta-set I.
inline BigCount card_R_beta_I(std::uint32_t s0, std::uint32_t f, std::uint32_t g, std::uint32_t d,
                              std::uint32_t beta) {
  if (g == 0) {
    if (beta > d) fail(Errc::BetaOutOfRange, "beta exceeds d");
    return 0;
  }
  if (s0 == 0 || beta < excluded_beta_min(s0, g, d) || beta + 1 > d || beta > f) {
    fail(Errc::BetaOutOfRange, "beta=" + std::to_string(beta) + " outside [beta_min, d-1]");
  }
  BigCount total = 0;
  for (std::uint32_t m = 1; m <= std::min(d - beta, g); ++m) {
    total += binomial(g, m) * detail::surjective_count(s0, beta, d - m);
  }
  return total;
}

/// 1-based inclusive block [start, end] of the j-th of m near-equal slices of [1, t].
template <class Count>
struct BlockRange {
  Count start;
  Count end;
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

template <class Count>
BlockRange<Count> block_bounds_as(const Count& t, const Count& m, const Count& j) {
  if (m < 1 || j < 1 || j > m) fail(Errc::IndexOutOfRange, "block index outside [1, m]");
  const Count q = t / m;
  const Count r = t % m;
  const Count jm1 = j - 1;
  return {jm1 * q + std::min(jm1, r) + 1, j * q + std::min(j, r)};
}

inline BlockRange<BigCount> block_bounds(const BigCount& t, const BigCount& m, const BigCount& j) {
  if (m < 1 || j < 1 || j > m) fail(Errc::IndexOutOfRange, "block index outside [1, m]");
  const BigCount q = t / m;
  const BigCount r = t % m;
  const BigCount jm1 = j - 1;
  return {jm1 * q + (jm1 < r ? jm1 : r) + 1, j * q + (j < r ? j : r)};
}

/// Which block (1-based) of block_bounds_as(t, m, .) holds position pos.
template <class Count>
Count block_of(const Count& t, const Count& m, const Count& pos) {
  if (m < 1 || pos < 1 || pos > t) fail(Errc::IndexOutOfRange, "position outside [1, t]");
  const Count q = t / m;
  const Count r = t % m;
  const Count big = r * (q + 1);
  if (pos <= big) return (pos + q) / (q + 1);
  return r + (pos - big + q - 1) / q;
}

/// Density threshold above which the high-probability balance guarantee holds.
struct PhiMin {
  double value;
  bool vacuous;  // value > 1: no density can meet it
};

/// phi_min = 96 N ln(2 N n) / (C(n, d) - 2^(d+2) N).
inline PhiMin phi_min(std::uint32_t n, std::uint32_t d, std::uint64_t workers) {
  check_dimensions(n, d);
  const BigCount denominator = binomial(n, d) - BigCount(workers) * (BigCount(1) << (d + 2));
  if (denominator <= 0) fail(Errc::DegenerateDenominator, "C(n,d) <= 2^(d+2) N");
  const double value = 96.0 * static_cast<double>(workers) *
                       std::log(2.0 * static_cast<double>(workers) * static_cast<double>(n)) /
                       denominator.convert_to<double>();
  return {value, value > 1.0};
}

/// Converse bound on the optimal communication cost.
struct PiLowerBound {
  double value;                  // phi^(1/d) n / N^(1/d)
  std::uint64_t integer_bound;   // max(ceil(value), d)
};

inline PiLowerBound pi_lower_bound(std::uint32_t n, std::uint32_t d, std::uint64_t workers, double phi) {
  if (!(phi > 0.0 && phi <= 1.0)) fail(Errc::InvalidPhi, "phi must lie in (0, 1]");
  if (workers < 1) fail(Errc::InvalidDimensions, "need at least one worker");
  check_dimensions(n, d);
  const double inv_d = 1.0 / static_cast<double>(d);
  const double value = std::pow(phi, inv_d) * static_cast<double>(n) / std::pow(static_cast<double>(workers), inv_d);
  const auto ceiling = static_cast<std::uint64_t>(std::ceil(value - 1e-9));
  return {value, std::max<std::uint64_t>(ceiling, d)};
}

/// Per-beta cardinalities for the block allocation.
struct CountingRow {
  std::uint32_t beta;
  BigCount t;       // tuples per support set I
  BigCount card;    // C(f, beta) * t
  BigCount m;       // eligible groups per I
  BigCount q;       // floor(t / m)
  BigCount r;       // t mod m
};

struct CountingTables {
  std::vector<CountingRow> common;    // C_beta rows, beta in [ceil(d/s), d]
  std::vector<CountingRow> excluded;  // R_beta rows, beta in [beta_min, d-1]; empty when g = 0
};

/// s is the family size (s0 in the non-divisible case).
inline CountingTables counting_tables(std::uint32_t s, std::uint32_t f, std::uint32_t g, std::uint32_t d) {
  CountingTables out;
  for (std::uint32_t beta = common_beta_min(s, d); beta <= std::min(d, f); ++beta) {
    CountingRow row{beta, t_beta(s, f, d, beta), 0, m_beta(f, d, beta), 0, 0};
    row.card = binomial(f, beta) * row.t;
    row.q = row.t / row.m;
    row.r = row.t % row.m;
    out.common.push_back(std::move(row));
  }
  if (g > 0) {
    for (std::uint32_t beta = excluded_beta_min(s, g, d); beta + 1 <= d && beta <= f; ++beta) {
      CountingRow row{beta, card_R_beta_I(s, f, g, d, beta), 0, m_beta(f, d, beta), 0, 0};
      row.card = binomial(f, beta) * row.t;
      row.q = row.t / row.m;
      row.r = row.t % row.m;
      out.excluded.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace icalloc

#endif  // ICALLOC_COUNTING_HPP
