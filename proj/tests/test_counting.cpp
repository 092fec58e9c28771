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

#include <cmath>
#include <map>
#include <set>

#include "icalloc/counting.hpp"

using namespace icalloc;

namespace {

// Tuples of A_{n,d} grouped by their exact set of touched blocks (block size s
// over [kept]); tuples needing an element above `kept` are tagged separately.
struct SupportCensus {
  std::map<std::set<unsigned>, std::uint64_t> plain;
  std::map<std::set<unsigned>, std::uint64_t> with_excluded;
};

SupportCensus census(unsigned n, unsigned d, unsigned s, unsigned kept) {
  SupportCensus out;
  for (const DTuple& t : LexTuples(n, d)) {
    std::set<unsigned> blocks;
    bool excluded = false;
    for (FileIndex x : t) {
      if (x > kept) {
        excluded = true;
      } else {
        blocks.insert((x - 1) / s + 1);
      }
    }
    ++(excluded ? out.with_excluded : out.plain)[blocks];
  }
  return out;
}

// The alternative sign placement (-1)^i for the excluded count.
BigCount r_with_plain_sign(unsigned s0, unsigned g, unsigned d, unsigned beta) {
  BigCount total = 0;
  for (unsigned m = 1; m <= std::min(d - beta, g); ++m) {
    BigCount inner = 0;
    for (unsigned i = 0; i <= beta; ++i) {
      BigCount term = binomial(beta, i) * binomial(i * s0, d - m);
      if (i % 2 == 0) inner += term; else inner -= term;
    }
    total += binomial(g, m) * inner;
  }
  return total;
}

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::SchemaError;
}

}  // namespace

TEST(TBeta, Examples) {
  EXPECT_EQ(t_beta(2, 3, 2, 1), 1);
  EXPECT_EQ(t_beta(2, 3, 2, 2), 4);
  EXPECT_EQ(t_beta(3, 3, 3, 1), 1);
  EXPECT_EQ(code_of([] { t_beta(2, 3, 3, 1); }), Errc::BetaOutOfRange);
  EXPECT_EQ(code_of([] { t_beta(2, 3, 2, 3); }), Errc::BetaOutOfRange);
}

TEST(CardC, ExamplesAndIdentity) {
  EXPECT_EQ(card_C_beta(2, 3, 2, 1), 3);
  EXPECT_EQ(card_C_beta(2, 3, 2, 2), 12);
  EXPECT_EQ(card_C_beta(2, 3, 2, 1) + card_C_beta(2, 3, 2, 2), binomial(6, 2));
}

TEST(MBeta, Examples) {
  EXPECT_EQ(m_beta(3, 2, 1), 2);
  EXPECT_EQ(m_beta(3, 2, 2), 1);
  EXPECT_EQ(m_beta(5, 3, 1), 6);
  EXPECT_EQ(code_of([] { m_beta(2, 3, 1); }), Errc::BetaOutOfRange);
}

TEST(CardR, Examples) {
  EXPECT_EQ(card_R_beta_I(2, 3, 1, 2, 1), 2);
  for (unsigned beta = 0; beta <= 2; ++beta) EXPECT_EQ(card_R_beta_I(2, 3, 0, 2, beta), 0);
  BigCount total = 0;
  for (unsigned beta = excluded_beta_min(2, 1, 2); beta <= 1; ++beta) {
    total += binomial(3, beta) * card_R_beta_I(2, 3, 1, 2, beta);
  }
  EXPECT_EQ(total, binomial(7, 2) - binomial(6, 2));
}

TEST(CardR, SignConventionAgainstEnumeration) {
  // n=7, s0=2, g=1, d=2, beta=1: enumeration gives 2; the plain sign gives -2.
  EXPECT_EQ(r_with_plain_sign(2, 1, 2, 1), -2);
  EXPECT_EQ(card_R_beta_I(2, 3, 1, 2, 1), 2);
}

TEST(Counting, TBetaMatchesEnumeration) {
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = d; n <= 20; ++n) {
      for (unsigned s = 1; s <= n; ++s) {
        if (n % s != 0) continue;
        const unsigned f = n / s;
        const SupportCensus c = census(n, d, s, n);
        std::map<unsigned, std::uint64_t> by_beta;
        for (const auto& [blocks, count] : c.plain) {
          // every support set of one size has the same count
          const BigCount t = t_beta(s, f, d, static_cast<unsigned>(blocks.size()));
          ASSERT_EQ(t, count) << n << " " << d << " " << s;
          by_beta[blocks.size()] += count;
        }
        BigCount identity = 0;
        for (unsigned beta = common_beta_min(s, d); beta <= std::min(d, f); ++beta) {
          const std::uint64_t seen = by_beta.count(beta) ? by_beta[beta] : 0;
          EXPECT_EQ(card_C_beta(s, f, d, beta), seen) << n << " " << d << " " << s << " " << beta;
          identity += binomial(f, beta) * t_beta(s, f, d, beta);
        }
        EXPECT_EQ(identity, binomial(n, d));
      }
    }
  }
}

TEST(Counting, TdIsSToTheD) {
  for (unsigned s = 1; s <= 6; ++s) {
    for (unsigned d = 1; d <= 5; ++d) EXPECT_EQ(t_beta(s, d, d, d), BigCount(std::pow(s, d)));
  }
}

TEST(Counting, CardRMatchesEnumeration) {
  for (unsigned d = 1; d <= 4; ++d) {
    for (unsigned n = d + 1; n <= 20; ++n) {
      for (unsigned s0 = 1; s0 <= n; ++s0) {
        for (unsigned g = 1; g <= n - s0 && g <= s0 * d; ++g) {
          if ((n - g) % s0 != 0) continue;
          const unsigned f = (n - g) / s0;
          if (f < d) continue;
          const SupportCensus c = census(n, d, s0, n - g);
          for (const auto& [blocks, count] : c.with_excluded) {
            ASSERT_EQ(card_R_beta_I(s0, f, g, d, static_cast<unsigned>(blocks.size())), count)
                << n << " " << d << " " << s0 << " " << g << " beta=" << blocks.size();
          }
          BigCount total = 0;
          for (unsigned beta = excluded_beta_min(s0, g, d); beta + 1 <= d && beta <= f; ++beta) {
            total += binomial(f, beta) * card_R_beta_I(s0, f, g, d, beta);
          }
          EXPECT_EQ(total, binomial(n, d) - binomial(n - g, d));
        }
      }
    }
  }
}

TEST(BlockBounds, Examples) {
  EXPECT_EQ(block_bounds(5, 2, 1).start, 1);
  EXPECT_EQ(block_bounds(5, 2, 1).end, 3);
  EXPECT_EQ(block_bounds(5, 2, 2).start, 4);
  EXPECT_EQ(block_bounds(5, 2, 2).end, 5);
  EXPECT_EQ(block_bounds(4, 2, 1).end, 2);
  EXPECT_EQ(block_bounds(4, 2, 2).start, 3);
  EXPECT_EQ(code_of([] { block_bounds(4, 2, 3); }), Errc::IndexOutOfRange);
  EXPECT_EQ(code_of([] { block_bounds(4, 2, 0); }), Errc::IndexOutOfRange);
}

TEST(BlockBounds, TilesExactly) {
  for (std::uint64_t t = 1; t <= 10000; t = t < 200 ? t + 1 : t * 3 / 2 + 7) {
    for (std::uint64_t m = 1; m <= t; m = m < 50 ? m + 1 : m * 2 + 3) {
      std::uint64_t expect_start = 1;
      std::uint64_t big = 0;
      for (std::uint64_t j = 1; j <= m; ++j) {
        const auto b = block_bounds_as<std::uint64_t>(t, m, j);
        ASSERT_EQ(b.start, expect_start);
        const std::uint64_t len = b.end + 1 - b.start;
        ASSERT_TRUE(len == t / m || len == t / m + 1);
        if (len == t / m + 1) ++big;
        ASSERT_EQ(block_of<std::uint64_t>(t, m, b.start), j);
        ASSERT_EQ(block_of<std::uint64_t>(t, m, b.end), j);
        expect_start = b.end + 1;
      }
      ASSERT_EQ(expect_start, t + 1);
      ASSERT_EQ(big, t % m);
    }
  }
}

TEST(PhiMin, Examples) {
  const PhiMin a = phi_min(1000, 2, 10);
  EXPECT_NEAR(a.value, 960.0 * std::log(20000.0) / 499340.0, 1e-12);
  EXPECT_NEAR(a.value, 0.01904, 5e-5);
  EXPECT_FALSE(a.vacuous);
  const PhiMin b = phi_min(200, 2, 10);
  EXPECT_NEAR(b.value, 0.403, 5e-4);
  EXPECT_FALSE(b.vacuous);
  const PhiMin c = phi_min(100, 2, 10);
  EXPECT_NEAR(c.value, 1.523, 5e-4);
  EXPECT_TRUE(c.vacuous);
  EXPECT_EQ(code_of([] { phi_min(10, 2, 10); }), Errc::DegenerateDenominator);
}

TEST(PiLowerBound, Examples) {
  const PiLowerBound a = pi_lower_bound(6, 2, 3, 1.0);
  EXPECT_NEAR(a.value, 3.4641016151377544, 1e-12);
  EXPECT_EQ(a.integer_bound, 4u);
  EXPECT_NEAR(pi_lower_bound(37, 3, 1, 1.0).value, 37.0, 1e-12);
  EXPECT_EQ(pi_lower_bound(37, 3, 1, 1.0).integer_bound, 37u);
  EXPECT_NEAR(pi_lower_bound(100, 2, 25, 0.25).value, 10.0, 1e-12);
  EXPECT_EQ(pi_lower_bound(100, 2, 25, 0.25).integer_bound, 10u);
  EXPECT_EQ(pi_lower_bound(100, 2, 10000, 0.01).integer_bound, 2u);
  EXPECT_EQ(code_of([] { pi_lower_bound(6, 2, 3, 0.0); }), Errc::InvalidPhi);
  EXPECT_EQ(code_of([] { pi_lower_bound(6, 2, 3, 1.5); }), Errc::InvalidPhi);
}

TEST(CountingTables, QuotientRemainder) {
  const CountingTables tables = counting_tables(2, 3, 0, 2);
  ASSERT_FALSE(tables.common.empty());
  for (const CountingRow& row : tables.common) {
    EXPECT_EQ(row.t, row.q * row.m + row.r);
    EXPECT_LT(row.r, row.m);
  }
  EXPECT_TRUE(tables.excluded.empty());
}
