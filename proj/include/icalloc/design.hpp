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

#ifndef ICALLOC_DESIGN_HPP
#define ICALLOC_DESIGN_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icalloc/combinatorics.hpp"
#include "icalloc/counting.hpp"
#include "icalloc/error.hpp"
#include "icalloc/params.hpp"
#include "icalloc/partition.hpp"
#include "icalloc/task_set.hpp"

namespace icalloc {

/// Largest C(n, d) (and N) for which build_base_partition materializes groups.
inline constexpr std::uint64_t kDefaultMaterializationCap = 10'000'000;

/// The X-independent partition of A_{n,d} into N groups.
struct BasePartition {
  ICParameters params;
  /// Final groups, each in lexicographic order; placement[b] = alpha(groups[b]).
  Partition partition;
  /// Sizes and footprint sizes of the N' groups before slicing, label in lex order.
  std::vector<std::uint64_t> pre_extension_sizes;
  std::vector<std::uint32_t> pre_extension_footprints;
  /// 0-based final group of the tuple with lexicographic rank i + 1.
  std::vector<std::uint32_t> group_of_rank;

  std::uint64_t workers() const noexcept { return params.workers; }

  /// 1-based group holding t.
  std::uint64_t group_of(const DTuple& t) const {
    return group_of_rank[lex_rank_as<std::uint64_t>(t, params.n) - 1] + 1;
  }
};

/// Base partition restricted to a task set: each group is the base group intersected with X.
struct FinalPartition {
  ICParameters params;
  Partition partition;  // groups restricted to X, placement = base footprints
  TaskMetadata metadata;

  friend bool operator==(const FinalPartition&, const FinalPartition&) = default;
};

namespace detail {

/// x-th (1-based) element of [f] \ excluded, with excluded sorted.
inline std::uint32_t complement_element(std::span<const std::uint32_t> excluded, std::uint32_t x) {
  for (std::uint32_t e : excluded) {
    if (e <= x) ++x;
  }
  return x;
}

/// label = I united with the j-th (lex) (d - width)-subset of [f] \ I.
inline DTuple eligible_group(std::span<const std::uint32_t> support, std::uint64_t j, std::uint32_t f, std::uint32_t d) {
  const auto width = static_cast<std::uint32_t>(support.size());
  std::array<FileIndex, kMaxDegree> buf{};
  std::size_t len = 0;
  for (std::uint32_t x : support) buf[len++] = static_cast<FileIndex>(x);
  const DTuple rest = lex_unrank_as<std::uint64_t>(j, f - width, d - width);
  for (FileIndex y : rest) buf[len++] = static_cast<FileIndex>(complement_element(support, y));
  std::sort(buf.begin(), buf.begin() + len);
  return DTuple::unchecked({buf.data(), len});
}

inline DTuple as_tuple(std::span<const std::uint32_t> xs) {
  std::array<FileIndex, kMaxDegree> buf{};
  for (std::size_t i = 0; i < xs.size(); ++i) buf[i] = static_cast<FileIndex>(xs[i]);
  return DTuple::unchecked({buf.data(), xs.size()});
}

inline std::uint64_t to_u64(const BigCount& v) {
  if (v > std::numeric_limits<std::uint64_t>::max()) fail(Errc::Overflow, "count exceeds 64 bits");
  return v.convert_to<std::uint64_t>();
}

}  // namespace detail

/// Materializes the base partition by walking A_{n,d} once in lexicographic
/// order, bucketing tuples by support and slicing each bucket into blocks.
inline BasePartition build_base_partition(const ICParameters& params,
                                          std::uint64_t cap = kDefaultMaterializationCap) {
  const std::uint32_t n = params.n;
  const std::uint32_t d = params.d;
  const std::uint32_t f = params.f;
  std::uint64_t total = 0;
  try {
    total = binomial_u64(n, d);
  } catch (const Error&) {
    fail(Errc::InstanceTooLarge, "C(n,d) exceeds 64 bits");
  }
  if (total > cap || params.workers > cap) {
    fail(Errc::InstanceTooLarge, "C(n,d)=" + std::to_string(total) + " or N exceeds the materialization cap " +
                                     std::to_string(cap));
  }

  // Support sets I are keyed by (width, lex rank of I among width-subsets of [f]).
  std::vector<std::uint64_t> offset(d + 2, 0);
  for (std::uint32_t width = 0; width <= d; ++width) offset[width + 1] = offset[width] + binomial_u64(f, width);
  const std::uint64_t per_kind = offset[d + 1];

  std::vector<DTuple> tuples;
  tuples.reserve(total);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(total);
  for (const DTuple& t : LexTuples(n, d)) {
    const SupportInfo info = support_of(t, params);
    const std::uint64_t rank_in_width =
        info.beta == 0 ? 0 : lex_rank_as<std::uint64_t>(detail::as_tuple(info.families), f) - 1;
    const std::uint64_t kind = info.excluded_count > 0 ? 1 : 0;
    keyed.emplace_back(kind * per_kind + offset[info.beta] + rank_in_width, static_cast<std::uint32_t>(tuples.size()));
    tuples.push_back(t);
  }
  std::sort(keyed.begin(), keyed.end());

  const std::uint64_t base_groups = params.base_groups;
  std::vector<std::vector<std::uint32_t>> pre(base_groups);
  for (std::size_t lo = 0; lo < keyed.size();) {
    std::size_t hi = lo;
    while (hi < keyed.size() && keyed[hi].first == keyed[lo].first) ++hi;
    const SupportInfo info = support_of(tuples[keyed[lo].second], params);
    const std::uint64_t bucket = hi - lo;
    if (info.excluded_count == 0 && info.beta == d) {
      const std::uint64_t b = lex_rank_as<std::uint64_t>(detail::as_tuple(info.families), f);
      for (std::size_t i = lo; i < hi; ++i) pre[b - 1].push_back(keyed[i].second);
    } else {
      const std::uint64_t eligible = binomial_u64(f - info.beta, d - info.beta);
      const std::uint64_t used = std::min(eligible, bucket);
      for (std::uint64_t j = 1; j <= used; ++j) {
        const DTuple label = detail::eligible_group(info.families, j, f, d);
        const std::uint64_t b = lex_rank_as<std::uint64_t>(label, f);
        const auto block = block_bounds_as<std::uint64_t>(bucket, eligible, j);
        for (std::uint64_t pos = block.start; pos <= block.end; ++pos) pre[b - 1].push_back(keyed[lo + pos - 1].second);
      }
    }
    lo = hi;
  }

  BasePartition out;
  out.params = params;
  out.partition.n = n;
  out.partition.d = d;
  out.partition.groups.resize(params.workers);
  out.group_of_rank.assign(total, 0);
  out.pre_extension_sizes.reserve(base_groups);
  out.pre_extension_footprints.reserve(base_groups);
  for (std::uint64_t b = 1; b <= base_groups; ++b) {
    auto& members = pre[b - 1];
    std::sort(members.begin(), members.end());
    std::vector<DTuple> contents;
    contents.reserve(members.size());
    for (std::uint32_t idx : members) contents.push_back(tuples[idx]);
    out.pre_extension_sizes.push_back(members.size());
    out.pre_extension_footprints.push_back(static_cast<std::uint32_t>(footprint(contents).size()));

    const std::uint64_t parts = params.parts_of(b);
    for (std::uint64_t j = 1; j <= parts; ++j) {
      const auto block = block_bounds_as<std::uint64_t>(members.size(), parts, j);
      const std::uint64_t target = b + (j - 1) * base_groups;  // 1-based
      auto& group = out.partition.groups[target - 1];
      for (std::uint64_t pos = block.start; pos <= block.end; ++pos) {
        group.push_back(contents[pos - 1]);
        out.group_of_rank[members[pos - 1]] = static_cast<std::uint32_t>(target - 1);
      }
    }
  }
  out.partition.placement.reserve(params.workers);
  for (const auto& group : out.partition.groups) out.partition.placement.push_back(footprint(group));
  return out;
}

inline BasePartition build_base_partition(std::uint32_t n, std::uint32_t d, std::uint64_t workers,
                                          std::uint64_t cap = kDefaultMaterializationCap) {
  return build_base_partition(derive_parameters(n, d, workers), cap);
}

/// Closed-form group lookup. Computes the group of a tuple from block
/// arithmetic and lexicographic counting inside support strata, without
/// materializing any group. Immutable after construction.
class Assigner {
 public:
  explicit Assigner(ICParameters params)
      : params_(std::move(params)), binom_(params_.n, params_.d) {
    const std::uint32_t s = params_.family_size();
    const std::uint32_t d = params_.d;
    common_size_.assign(d + 1, 0);
    excluded_size_.assign(d + 1, 0);
    common_min_ = common_beta_min(s, d);
    for (std::uint32_t width = common_min_; width <= d; ++width) {
      common_size_[width] = detail::to_u64(t_beta(s, params_.f, d, width));
    }
    if (params_.g > 0) {
      excluded_min_ = excluded_beta_min(s, params_.g, d);
      for (std::uint32_t width = excluded_min_; width + 1 <= d; ++width) {
        excluded_size_[width] = detail::to_u64(card_R_beta_I(s, params_.f, params_.g, d, width));
      }
    }
  }

  const ICParameters& params() const noexcept { return params_; }

  /// Label label of pre-extension group b (1-based, lex order over C([f], d)).
  DTuple group_label(std::uint64_t b) const { return lex_unrank_as<std::uint64_t>(b, params_.f, params_.d); }

  /// 1-based index of the pre-extension group holding t.
  std::uint64_t pre_extension_group(const DTuple& t) const {
    return lex_rank_as<std::uint64_t>(pre_extension_label(t), params_.f);
  }

  /// 1-based index of the final group holding t.
  std::uint64_t operator()(const DTuple& t) const {
    if (!t.valid_for(params_.n, params_.d)) fail(Errc::IndexOutOfBounds, "tuple " + t.to_string() + " not in A_{n,d}");
    const DTuple label = pre_extension_label(t);
    const std::uint64_t b = lex_rank_as<std::uint64_t>(label, params_.f);
    const std::uint64_t parts = params_.parts_of(b);
    if (parts <= 1) return b;
    std::uint64_t less = 0;
    const std::uint64_t size = scan_group(label, &t, &less);
    const std::uint64_t part = block_of<std::uint64_t>(size, parts, less + 1);
    return b + (part - 1) * params_.base_groups;
  }

  /// Size of pre-extension group b.
  std::uint64_t pre_extension_size(std::uint64_t b) const { return scan_group(group_label(b), nullptr, nullptr); }

 private:
  struct Support {
    std::array<std::uint32_t, kMaxDegree> families{};
    std::uint32_t width = 0;
    std::uint32_t excluded = 0;
    std::span<const std::uint32_t> span() const { return {families.data(), width}; }
  };

  Support support(const DTuple& t) const {
    Support out;
    for (FileIndex x : t) {
      const std::uint32_t fam = family_of(params_, x);
      if (fam == 0) {
        ++out.excluded;
      } else if (out.width == 0 || out.families[out.width - 1] != fam) {
        out.families[out.width++] = fam;
      }
    }
    return out;
  }

  DTuple pre_extension_label(const DTuple& t) const {
    const Support sup = support(t);
    const std::uint32_t d = params_.d;
    if (sup.excluded == 0 && sup.width == d) return detail::as_tuple(sup.span());
    const bool exc = sup.excluded > 0;
    const std::uint64_t size = exc ? excluded_size_[sup.width] : common_size_[sup.width];
    const std::uint64_t eligible = binom_(params_.f - sup.width, d - sup.width);
    const std::uint64_t position = count_less(t, sup.span(), exc) + 1;
    const std::uint64_t j = block_of<std::uint64_t>(size, eligible, position);
    return detail::eligible_group(sup.span(), j, params_.f, d);
  }

  /// Number of tuples y < x (lex) with support exactly I; with exc, y must
  /// also hold at least one excluded file, otherwise none.
  std::uint64_t count_less(const DTuple& x, std::span<const std::uint32_t> support_set, bool exc) const {
    const std::uint32_t d = params_.d;
    const std::uint32_t width = static_cast<std::uint32_t>(support_set.size());
    auto slot = [&](std::uint32_t v) -> int {
      const std::uint32_t fam = family_of(params_, v);
      if (fam == 0) return exc ? static_cast<int>(width) : -1;
      const auto it = std::lower_bound(support_set.begin(), support_set.end(), fam);
      return (it != support_set.end() && *it == fam) ? static_cast<int>(it - support_set.begin()) : -1;
    };
    std::uint64_t total = 0;
    std::uint32_t covered = 0;
    bool has_exc = false;
    for (std::uint32_t i = 0; i < d; ++i) {
      const std::uint32_t lo = i == 0 ? 1 : x[i - 1] + 1;
      const std::uint32_t hi = x[i];
      for (std::uint32_t v = lo; v < hi; ++v) {
        const int sl = slot(v);
        if (sl < 0) continue;
        const bool is_exc = sl == static_cast<int>(width);
        total = detail::checked_add(
            total, completions(v, d - i - 1, is_exc ? covered : covered | (1u << sl), has_exc || is_exc, support_set, exc));
      }
      const int sl = slot(hi);
      if (sl < 0) break;
      if (sl == static_cast<int>(width)) {
        has_exc = true;
      } else {
        covered |= 1u << sl;
      }
    }
    return total;
  }

  /// k-subsets of allowed files above v that complete the coverage of I (and
  /// the excluded-file requirement), by inclusion-exclusion over missed families.
  std::uint64_t completions(std::uint32_t v, std::uint32_t k, std::uint32_t covered, bool has_exc,
                            std::span<const std::uint32_t> support_set, bool exc) const {
    const std::uint32_t width = static_cast<std::uint32_t>(support_set.size());
    const std::uint32_t s = params_.family_size();
    std::array<std::int64_t, kMaxDegree> above{};
    std::int64_t in_families = 0;
    for (std::uint32_t j = 0; j < width; ++j) {
      const std::int64_t fam_lo = static_cast<std::int64_t>(support_set[j] - 1) * s;  // exclusive
      const std::int64_t fam_hi = static_cast<std::int64_t>(support_set[j]) * s;
      above[j] = std::max<std::int64_t>(0, fam_hi - std::max<std::int64_t>(v, fam_lo));
      in_families += above[j];
    }
    const std::int64_t exc_above =
        exc ? static_cast<std::int64_t>(params_.n) - std::max<std::int64_t>(v, params_.n_prime) : 0;
    const bool need_exc = exc && !has_exc;
    const std::uint32_t missing = ((1u << width) - 1) & ~covered;
    __int128 acc = 0;
    // Enumerate subsets T of the missing families.
    for (std::uint32_t t = missing;; t = (t - 1) & missing) {
      std::int64_t pool = in_families + exc_above;
      for (std::uint32_t j = 0; j < width; ++j) {
        if (t & (1u << j)) pool -= above[j];
      }
      __int128 term = binom_(pool, k);
      if (need_exc) term -= binom_(pool - exc_above, k);
      acc += (std::popcount(t) % 2 == 0) ? term : -term;
      if (t == 0) break;
    }
    return static_cast<std::uint64_t>(acc);
  }

  /// Walks every stratum feeding group label. Returns its size; when x is
  /// given, also stores how many members of the group precede x.
  std::uint64_t scan_group(const DTuple& label, const DTuple* x, std::uint64_t* less) const {
    const std::uint32_t d = params_.d;
    const std::uint32_t f = params_.f;
    std::array<std::uint32_t, kMaxDegree> labels{};
    for (std::uint32_t i = 0; i < d; ++i) labels[i] = label[i];
    std::uint64_t size = common_size_[d];
    std::uint64_t before = 0;
    if (x) before += count_less(*x, {labels.data(), d}, false);

    auto visit = [&](std::uint32_t width, bool exc, std::uint64_t stratum_size) {
      if (stratum_size == 0) return;
      const std::uint64_t eligible = binom_(f - width, d - width);
      // Every width-subset I of label, chosen by position mask.
      for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        if (static_cast<std::uint32_t>(std::popcount(mask)) != width) continue;
        std::array<std::uint32_t, kMaxDegree> chosen{};
        std::array<std::uint32_t, kMaxDegree> rest{};
        std::uint32_t nc = 0;
        std::uint32_t nr = 0;
        for (std::uint32_t i = 0; i < d; ++i) {
          if (mask & (1u << i)) {
            chosen[nc++] = labels[i];
          } else {
            rest[nr++] = labels[i];
          }
        }
        // Position of label among the eligible groups of I: rank of label \ I
        // relabelled into [f] \ I.
        std::array<FileIndex, kMaxDegree> relabelled{};
        for (std::uint32_t i = 0; i < nr; ++i) {
          std::uint32_t shift = 0;
          for (std::uint32_t c = 0; c < nc; ++c) shift += chosen[c] < rest[i] ? 1 : 0;
          relabelled[i] = static_cast<FileIndex>(rest[i] - shift);
        }
        const std::uint64_t j =
            lex_rank_as<std::uint64_t>(DTuple::unchecked({relabelled.data(), nr}), f - width);
        const auto block = block_bounds_as<std::uint64_t>(stratum_size, eligible, j);
        if (block.end < block.start) continue;
        size += block.end - block.start + 1;
        if (x) {
          const std::uint64_t below = count_less(*x, {chosen.data(), nc}, exc);
          before += std::clamp(below, block.start - 1, block.end) - (block.start - 1);
        }
      }
    };
    for (std::uint32_t width = common_min_; width < d; ++width) visit(width, false, common_size_[width]);
    if (params_.g > 0) {
      for (std::uint32_t width = excluded_min_; width < d; ++width) visit(width, true, excluded_size_[width]);
    }
    if (less) *less = before;
    return size;
  }

  ICParameters params_;
  BinomialTable binom_;
  std::vector<std::uint64_t> common_size_;
  std::vector<std::uint64_t> excluded_size_;
  std::uint32_t common_min_ = 0;
  std::uint32_t excluded_min_ = 0;
};

/// 1-based final group of t; agrees with build_base_partition membership.
inline std::uint64_t assign_base_group(const DTuple& t, const ICParameters& params) { return Assigner(params)(t); }

/// alpha of final group b (1-based), computed by scanning only the tuples
/// that could belong to it: d-subsets of the files of label's families and E.
inline FileSet group_footprint(const Assigner& assigner, std::uint64_t b) {
  const ICParameters& params = assigner.params();
  const std::uint64_t pre = (b - 1) % params.base_groups + 1;
  const DTuple label = assigner.group_label(pre);
  const std::uint32_t s = params.family_size();
  std::vector<std::uint32_t> universe;
  for (FileIndex fam : label) {
    for (std::uint32_t x = (fam - 1) * s + 1; x <= fam * s; ++x) universe.push_back(x);
  }
  for (std::uint32_t x = params.n_prime + 1; x <= params.n; ++x) universe.push_back(x);
  const auto u = static_cast<std::uint32_t>(universe.size());
  std::vector<bool> seen(params.n + 1, false);
  if (u >= params.d) {
    std::array<FileIndex, kMaxDegree> buf{};
    for (const DTuple& pick : LexTuples(u, params.d)) {
      for (std::size_t i = 0; i < params.d; ++i) buf[i] = static_cast<FileIndex>(universe[pick[i] - 1]);
      const DTuple t = DTuple::unchecked({buf.data(), params.d});
      if (assigner(t) == b) {
        for (FileIndex x : t) seen[x] = true;
      }
    }
  }
  FileSet out;
  for (std::uint32_t x = 1; x <= params.n; ++x) {
    if (seen[x]) out.push_back(static_cast<FileIndex>(x));
  }
  return out;
}

/// Each group becomes its base group intersected with X; placement stays the base footprints.
inline FinalPartition refine(const BasePartition& base, const TaskSet& tasks) {
  if (tasks.n() != base.params.n || tasks.d() != base.params.d) {
    fail(Errc::DimensionMismatch, "task set (n, d) differs from the base partition");
  }
  FinalPartition out{base.params, {base.params.n, base.params.d, {}, base.partition.placement}, tasks.metadata()};
  out.partition.groups.resize(base.params.workers);
  for (const DTuple& t : tasks.edges()) out.partition.groups[base.group_of(t) - 1].push_back(t);
  return out;
}

/// Refinement without a materialized base partition. Placement is obtained
/// per group by group_footprint.
inline FinalPartition refine_streaming(const Assigner& assigner, const TaskSet& tasks) {
  const ICParameters& params = assigner.params();
  if (tasks.n() != params.n || tasks.d() != params.d) {
    fail(Errc::DimensionMismatch, "task set (n, d) differs from the parameters");
  }
  FinalPartition out{params, {params.n, params.d, {}, {}}, tasks.metadata()};
  out.partition.groups.resize(params.workers);
  for (const DTuple& t : tasks.edges()) out.partition.groups[assigner(t) - 1].push_back(t);
  out.partition.placement.reserve(params.workers);
  for (std::uint64_t b = 1; b <= params.workers; ++b) out.partition.placement.push_back(group_footprint(assigner, b));
  return out;
}

}  // namespace icalloc

#endif  // ICALLOC_DESIGN_HPP
