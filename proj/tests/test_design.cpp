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

#include <algorithm>
#include <random>
#include <set>

#include "icalloc/design.hpp"

using namespace icalloc;

namespace {

std::vector<DTuple> tuples(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<DTuple> out;
  for (auto [a, b] : pairs) out.push_back(DTuple{a, b});
  std::sort(out.begin(), out.end());
  return out;
}

FileSet files(std::initializer_list<int> xs) {
  FileSet out;
  for (int x : xs) out.push_back(static_cast<FileIndex>(x));
  return out;
}

}  // namespace

TEST(DeriveParameters, Examples) {
  const ICParameters a = derive_parameters(6, 2, 3);
  EXPECT_EQ(a.k, 3u);
  EXPECT_EQ(a.f, 3u);
  EXPECT_EQ(a.s, 2u);
  EXPECT_EQ(a.base_groups, 3u);
  EXPECT_EQ(a.design_case, DesignCase::Divisible);
  EXPECT_EQ(a.q, 1u);
  EXPECT_EQ(a.p, 1u);
  EXPECT_EQ(a.r, 0u);

  const ICParameters b = derive_parameters(7, 2, 3);
  EXPECT_EQ(b.k, 3u);
  EXPECT_EQ(b.s0, 2u);
  EXPECT_EQ(b.g, 1u);
  EXPECT_EQ(b.n_prime, 6u);
  EXPECT_EQ(b.design_case, DesignCase::NonDivisible);

  const ICParameters c = derive_parameters(6, 2, 4);
  EXPECT_EQ(c.k, 3u);
  EXPECT_EQ(c.base_groups, 3u);
  EXPECT_EQ(c.q, 1u);
  EXPECT_EQ(c.p, 2u);
  EXPECT_EQ(c.r, 1u);
}

TEST(DeriveParameters, Errors) {
  try {
    derive_parameters(3, 4, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidDimensions);
  }
  // n=11, d=2, N=28: k=8 and floor(11/10)+1 = 2 > floor(11/8) = 1.
  try {
    derive_parameters(11, 2, 28);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedParameters);
  }
}

TEST(DeriveParameters, InvariantsOverGrid) {
  for (std::uint32_t d = 2; d <= 4; ++d) {
    for (std::uint32_t n = d; n <= 80; ++n) {
      for (std::uint64_t w = 1; w <= 120; ++w) {
        ICParameters p;
        try {
          p = derive_parameters(n, d, w);
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), Errc::UnsupportedParameters);
          continue;
        }
        ASSERT_LE(binomial(p.k, d), w);
        if (!p.capped && p.k < n) {
          ASSERT_GT(binomial(p.k + 1, d), w);
        }
        ASSERT_EQ(w, p.q * p.base_groups + p.r);
        ASSERT_LT(p.r, p.base_groups);
        if (p.design_case == DesignCase::Divisible) {
          ASSERT_EQ(n, p.k * p.s);
          ASSERT_EQ(p.g, 0u);
        } else {
          ASSERT_EQ(n, p.k * p.s0 + p.g);
          ASSERT_LE(p.g, p.s0 * d);
          ASSERT_EQ(p.s0, n / (p.k + d) + 1);
        }
      }
    }
  }
}

TEST(Families, Examples) {
  const Families a = build_families(derive_parameters(6, 2, 3));
  EXPECT_EQ(a.members, (std::vector<FileSet>{files({1, 2}), files({3, 4}), files({5, 6})}));
  EXPECT_TRUE(a.excluded.empty());
  const Families b = build_families(derive_parameters(7, 2, 3));
  EXPECT_EQ(b.members, (std::vector<FileSet>{files({1, 2}), files({3, 4}), files({5, 6})}));
  EXPECT_EQ(b.excluded, files({7}));
  const Families c = build_families(derive_parameters(12, 2, 3));
  EXPECT_EQ(c.members, (std::vector<FileSet>{files({1, 2, 3, 4}), files({5, 6, 7, 8}), files({9, 10, 11, 12})}));
}

TEST(Support, Examples) {
  const ICParameters six = derive_parameters(6, 2, 3);
  EXPECT_EQ(support_of(DTuple{3, 4}, six), (SupportInfo{{2}, 1, 0}));
  EXPECT_EQ(support_of(DTuple{1, 6}, six), (SupportInfo{{1, 3}, 2, 0}));
  EXPECT_EQ(support_of(DTuple{1, 7}, derive_parameters(7, 2, 3)), (SupportInfo{{1}, 1, 1}));
}

TEST(BasePartition, CaseOneWorkedExample) {
  const BasePartition base = build_base_partition(6, 2, 3);
  ASSERT_EQ(base.partition.workers(), 3u);
  EXPECT_EQ(base.partition.groups[0], tuples({{1, 3}, {1, 4}, {2, 3}, {2, 4}, {1, 2}, {3, 4}}));
  EXPECT_EQ(base.partition.groups[1], tuples({{1, 5}, {1, 6}, {2, 5}, {2, 6}, {5, 6}}));
  EXPECT_EQ(base.partition.groups[2], tuples({{3, 5}, {3, 6}, {4, 5}, {4, 6}}));
  EXPECT_EQ(base.partition.placement,
            (std::vector<FileSet>{files({1, 2, 3, 4}), files({1, 2, 5, 6}), files({3, 4, 5, 6})}));
  EXPECT_EQ(base.pre_extension_sizes, (std::vector<std::uint64_t>{6, 5, 4}));
}

TEST(BasePartition, CaseTwoWorkedExample) {
  const BasePartition base = build_base_partition(7, 2, 3);
  EXPECT_EQ(base.group_of(DTuple{1, 7}), 1u);
  std::size_t widest = 0;
  for (const auto& f : base.partition.placement) widest = std::max(widest, f.size());
  EXPECT_LE(widest, 5u);
}

TEST(BasePartition, ExtensionSlicesInLexOrder) {
  const BasePartition base = build_base_partition(6, 2, 4);
  ASSERT_EQ(base.partition.workers(), 4u);
  EXPECT_EQ(base.partition.groups[0], tuples({{1, 2}, {1, 3}, {1, 4}}));
  EXPECT_EQ(base.partition.groups[3], tuples({{2, 3}, {2, 4}, {3, 4}}));
  EXPECT_EQ(base.partition.groups[1], tuples({{1, 5}, {1, 6}, {2, 5}, {2, 6}, {5, 6}}));
}

TEST(BasePartition, CappedWorkersLeaveEmptyGroups) {
  // N >= C(n,d): one tuple per base group, the rest empty.
  const BasePartition base = build_base_partition(5, 2, 25);
  EXPECT_TRUE(base.params.capped);
  EXPECT_EQ(base.params.base_groups, 10u);
  std::size_t nonempty = 0;
  for (const auto& g : base.partition.groups) nonempty += !g.empty();
  EXPECT_EQ(nonempty, 10u);
  EXPECT_EQ(base.partition.task_count(), 10u);
}

TEST(BasePartition, TooLargeToMaterialize) {
  try {
    build_base_partition(derive_parameters(400, 4, 100), 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InstanceTooLarge);
  }
}

TEST(AssignBaseGroup, Examples) {
  const ICParameters p = derive_parameters(6, 2, 3);
  EXPECT_EQ(assign_base_group(DTuple{3, 4}, p), 1u);
  EXPECT_EQ(assign_base_group(DTuple{1, 3}, p), 1u);
  EXPECT_EQ(assign_base_group(DTuple{5, 6}, p), 2u);
  EXPECT_EQ(Assigner(p).group_label(2), (DTuple{1, 3}));
}

TEST(BasePartition, ValidityAndAgreementOverGrid) {
  for (std::uint32_t d = 2; d <= 4; ++d) {
    for (std::uint32_t n = d; n <= (d == 4 ? 16u : 22u); ++n) {
      for (std::uint64_t w = 1; w <= 40; ++w) {
        BasePartition base;
        try {
          base = build_base_partition(n, d, w);
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), Errc::UnsupportedParameters);
          continue;
        }
        std::vector<DTuple> all;
        for (const auto& g : base.partition.groups) all.insert(all.end(), g.begin(), g.end());
        std::sort(all.begin(), all.end());
        ASSERT_EQ(all, enumerate_lex(n, d)) << n << " " << d << " " << w;
        const Assigner assigner(base.params);
        for (std::size_t b = 0; b < base.partition.workers(); ++b) {
          for (const DTuple& t : base.partition.groups[b]) ASSERT_EQ(assigner(t), b + 1) << t.to_string();
          ASSERT_EQ(group_footprint(assigner, b + 1), base.partition.placement[b]);
        }
        for (std::uint64_t s = 1; s <= base.params.base_groups; ++s) {
          ASSERT_EQ(assigner.pre_extension_size(s), base.pre_extension_sizes[s - 1]);
        }
      }
    }
  }
}

TEST(BasePartition, LargeInstanceAssignerAgreesOnSample) {
  const BasePartition base = build_base_partition(120, 3, 150);
  const Assigner assigner(base.params);
  std::mt19937_64 rng(7);
  const std::uint64_t total = binomial_u64(120, 3);
  for (int i = 0; i < 2000; ++i) {
    const DTuple t = lex_unrank_as<std::uint64_t>(rng() % total + 1, 120, 3);
    ASSERT_EQ(assigner(t), base.group_of(t));
  }
}

TEST(Refine, Examples) {
  const BasePartition base = build_base_partition(6, 2, 3);
  const FinalPartition fin = refine(base, TaskSet(6, 2, {DTuple{1, 2}, DTuple{3, 5}, DTuple{1, 6}}));
  EXPECT_EQ(fin.partition.groups[0], tuples({{1, 2}}));
  EXPECT_EQ(fin.partition.groups[1], tuples({{1, 6}}));
  EXPECT_EQ(fin.partition.groups[2], tuples({{3, 5}}));
  EXPECT_EQ(fin.partition.placement, base.partition.placement);

  const FinalPartition full = refine(base, TaskSet::full(6, 2));
  EXPECT_EQ(full.partition.groups, base.partition.groups);

  const FinalPartition none = refine(base, TaskSet(6, 2));
  EXPECT_EQ(none.partition.task_count(), 0u);
  EXPECT_EQ(none.partition.placement, base.partition.placement);
}

TEST(Refine, DimensionMismatch) {
  const BasePartition base = build_base_partition(6, 2, 3);
  try {
    refine(base, TaskSet(7, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Refine, StreamingMatchesMaterialized) {
  const BasePartition base = build_base_partition(30, 3, 17);
  std::vector<DTuple> some;
  std::uint64_t i = 0;
  for (const DTuple& t : LexTuples(30, 3)) {
    if (++i % 7 == 0) some.push_back(t);
  }
  const TaskSet tasks(30, 3, some);
  EXPECT_EQ(refine_streaming(Assigner(base.params), tasks), refine(base, tasks));
}

TEST(Refine, FeasibleForAnyTaskSet) {
  const BasePartition base = build_base_partition(25, 2, 11);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<DTuple> some;
    for (const DTuple& t : LexTuples(25, 2)) {
      if (rng() % 3 == 0) some.push_back(t);
    }
    const FinalPartition fin = refine(base, TaskSet(25, 2, some));
    for (std::size_t b = 0; b < fin.partition.workers(); ++b) {
      EXPECT_TRUE(is_subset(footprint(fin.partition.groups[b]), fin.partition.placement[b]));
    }
    EXPECT_EQ(fin.partition.task_count(), some.size());
  }
}
