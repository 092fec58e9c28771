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

#ifndef ICALLOC_PARAMS_HPP
#define ICALLOC_PARAMS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "icalloc/combinatorics.hpp"
#include "icalloc/error.hpp"
#include "icalloc/partition.hpp"

namespace icalloc {

enum class DesignCase { Divisible, NonDivisible };

constexpr std::string_view to_string(DesignCase c) noexcept {
  return c == DesignCase::Divisible ? "divisible" : "non_divisible";
}

/// Construction constants of the interweaved-cliques design for (n, d, N).
struct ICParameters {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t workers = 0;   // N
  std::uint32_t k = 0;         // largest r with C(r, d) <= N, capped at n
  std::uint32_t f = 0;         // number of families, equal to k
  DesignCase design_case = DesignCase::Divisible;
  std::uint32_t s = 0;         // family size, divisible case only
  std::uint32_t s0 = 0;        // family size, non-divisible case only
  std::uint32_t g = 0;         // excluded files
  std::uint32_t n_prime = 0;   // n - g
  std::uint64_t base_groups = 0;  // N' = C(k, d)
  std::uint64_t q = 0;         // floor(N / N')
  std::uint64_t p = 0;         // ceil(N / N')
  std::uint64_t r = 0;         // N mod N'
  bool capped = false;         // k was clipped to n because N >= C(n, d)

  std::uint32_t family_size() const noexcept { return design_case == DesignCase::Divisible ? s : s0; }

  /// The recommended operating range 2 <= d <= n / 32.
  bool within_recommended_range() const noexcept { return d >= 2 && 32ull * d <= n; }

  /// Number of parts pre-extension group b (1-based) is sliced into.
  std::uint64_t parts_of(std::uint64_t b) const noexcept { return b <= r ? p : q; }

  friend bool operator==(const ICParameters&, const ICParameters&) = default;
};

/// k in K_valid: floor(n / (k + d)) + 1 <= floor(n / k).
inline bool k_valid(std::uint32_t n, std::uint32_t d, std::uint32_t k) {
  return k >= d && k <= n && n / (k + d) + 1 <= n / k;
}

/// k_max = floor((-d + sqrt(d^2 + 4 d n)) / 2), the largest k with k^2 + d k <= d n.
inline std::uint32_t k_max(std::uint32_t n, std::uint32_t d) {
  auto k = static_cast<std::uint64_t>((-static_cast<double>(d) + std::sqrt(static_cast<double>(d) * d + 4.0 * d * n)) / 2.0);
  while (k * k + d * k > static_cast<std::uint64_t>(d) * n) --k;
  while ((k + 1) * (k + 1) + d * (k + 1) <= static_cast<std::uint64_t>(d) * n) ++k;
  return static_cast<std::uint32_t>(k);
}

/// N_max = C(k_max, d).
inline BigCount n_max(std::uint32_t n, std::uint32_t d) { return binomial(k_max(n, d), d); }

/// Operating range for the balance guarantees: 32 d <= n and N <= (0.9 sqrt(n / d))^d.
inline bool within_balance_range(std::uint32_t n, std::uint32_t d, std::uint64_t workers) {
  return 32ull * d <= n &&
         static_cast<double>(workers) <= std::pow(0.9 * std::sqrt(static_cast<double>(n) / d), static_cast<double>(d));
}

inline ICParameters derive_parameters(std::uint32_t n, std::uint32_t d, std::uint64_t workers) {
  check_dimensions(n, d);
  if (workers < 1) fail(Errc::InvalidDimensions, "need at least one worker");
  ICParameters out;
  out.n = n;
  out.d = d;
  out.workers = workers;

  auto fits = [&](std::uint32_t r) {
    try {
      return binomial_u64(r, d) <= workers;
    } catch (const Error&) {
      return false;
    }
  };
  std::uint32_t k = d;
  while (k < n && fits(k + 1)) ++k;
  out.capped = k == n && binomial(n + 1, d) <= workers;
  out.k = k;
  out.f = k;

  if (n % k == 0) {
    out.design_case = DesignCase::Divisible;
    out.s = n / k;
    out.g = 0;
    out.n_prime = n;
  } else {
    out.design_case = DesignCase::NonDivisible;
    if (!k_valid(n, d, k)) {
      fail(Errc::UnsupportedParameters,
           "k=" + std::to_string(k) + " is not in K_valid for n=" + std::to_string(n) + ", d=" + std::to_string(d) +
               " (N exceeds N_max=" + n_max(n, d).str() + ")");
    }
    out.s0 = n / (k + d) + 1;
    out.g = n - k * out.s0;
    out.n_prime = n - out.g;
  }

  out.base_groups = binomial_u64(k, d);
  out.q = workers / out.base_groups;
  out.r = workers % out.base_groups;
  out.p = out.q + (out.r > 0 ? 1 : 0);
  return out;
}

/// Contiguous families F_1..F_f over [n'] plus the excluded files E = (n', n].
struct Families {
  std::vector<FileSet> members;
  FileSet excluded;
};

inline Families build_families(const ICParameters& params) {
  Families out;
  const std::uint32_t s = params.family_size();
  for (std::uint32_t i = 1; i <= params.f; ++i) {
    FileSet fam(s);
    for (std::uint32_t j = 0; j < s; ++j) fam[j] = static_cast<FileIndex>((i - 1) * s + j + 1);
    out.members.push_back(std::move(fam));
  }
  for (std::uint32_t x = params.n_prime + 1; x <= params.n; ++x) out.excluded.push_back(static_cast<FileIndex>(x));
  return out;
}

/// Family of file x (1-based), or 0 for an excluded file.
inline std::uint32_t family_of(const ICParameters& params, std::uint32_t x) noexcept {
  return x <= params.n_prime ? (x - 1) / params.family_size() + 1 : 0;
}

/// B(t): the families a tuple meets, and how many excluded files it holds.
struct SupportInfo {
  std::vector<std::uint32_t> families;  // sorted, 1-based
  std::uint32_t beta = 0;
  std::uint32_t excluded_count = 0;

  friend bool operator==(const SupportInfo&, const SupportInfo&) = default;
};

inline SupportInfo support_of(const DTuple& t, const ICParameters& params) {
  SupportInfo out;
  for (FileIndex x : t) {
    const std::uint32_t fam = family_of(params, x);
    if (fam == 0) {
      ++out.excluded_count;
    } else if (out.families.empty() || out.families.back() != fam) {
      out.families.push_back(fam);  // tuples are sorted, so families arrive sorted
    }
  }
  out.beta = static_cast<std::uint32_t>(out.families.size());
  return out;
}

enum class Stratum { Full, Common, Excluded };

inline Stratum stratum_of(const DTuple& t, const ICParameters& params) {
  const SupportInfo info = support_of(t, params);
  if (info.excluded_count > 0) return Stratum::Excluded;
  return info.beta == params.d ? Stratum::Full : Stratum::Common;
}

}  // namespace icalloc

#endif  // ICALLOC_PARAMS_HPP
