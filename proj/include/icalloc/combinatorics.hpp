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

#ifndef ICALLOC_COMBINATORICS_HPP
#define ICALLOC_COMBINATORICS_HPP

#include <algorithm>
#include <array>
#include <compare>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "icalloc/error.hpp"

namespace icalloc {

/// Exact non-negative integer of unbounded magnitude.
using BigCount = boost::multiprecision::cpp_int;

/// 1-based file index.
using FileIndex = std::uint16_t;

inline constexpr std::size_t kMaxDegree = 8;
inline constexpr std::uint32_t kMaxFiles = std::numeric_limits<FileIndex>::max();

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) fail(Errc::Overflow, "64-bit multiplication overflow");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) fail(Errc::Overflow, "64-bit addition overflow");
  return out;
}

}  // namespace detail

/// C(n, k) for a count type; 0 when k > n. The 64-bit instantiation throws
/// Errc::Overflow instead of wrapping.
template <class Count>
Count binomial_as(std::uint64_t n, std::uint64_t k) {
  if (k > n) return Count(0);
  k = std::min(k, n - k);
  if constexpr (std::same_as<Count, std::uint64_t>) {
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      // acc holds C(n-k+i-1, i-1) <= 2^64, so the product fits in 128 bits.
      acc = acc * (n - k + i) / i;
      if (acc > std::numeric_limits<std::uint64_t>::max()) {
        fail(Errc::Overflow, "C(" + std::to_string(n) + "," + std::to_string(k) + ") exceeds 64 bits");
      }
    }
    return static_cast<std::uint64_t>(acc);
  } else {
    Count acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
      acc *= (n - k + i);
      acc /= i;
    }
    return acc;
  }
}

/// Exact binomial coefficient C(n, k); 0 when k > n.
inline BigCount binomial(std::uint64_t n, std::uint64_t k) { return binomial_as<BigCount>(n, k); }

/// Checked 64-bit binomial coefficient.
inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  return binomial_as<std::uint64_t>(n, k);
}

/// Pascal table C(a, b) for a <= max_n, b <= max_k. Entries that do not fit
/// in 64 bits are stored saturated and rejected on lookup.
class BinomialTable {
 public:
  BinomialTable() = default;
  BinomialTable(std::uint32_t max_n, std::uint32_t max_k)
      : max_n_(max_n), max_k_(max_k), table_((max_n + 1) * static_cast<std::size_t>(max_k + 1), 0) {
    for (std::uint32_t a = 0; a <= max_n; ++a) {
      at(a, 0) = 1;
      for (std::uint32_t b = 1; b <= std::min(a, max_k); ++b) {
        std::uint64_t v = 0;
        if (__builtin_add_overflow(at(a - 1, b - 1), b <= a - 1 ? at(a - 1, b) : 0, &v)) {
          v = kSaturated;
        }
        if (at(a - 1, b - 1) == kSaturated || (b <= a - 1 && at(a - 1, b) == kSaturated)) v = kSaturated;
        at(a, b) = v;
      }
    }
  }

  std::uint64_t operator()(std::int64_t a, std::int64_t b) const {
    if (a < 0 || b < 0 || b > a) return 0;
    if (a > static_cast<std::int64_t>(max_n_) || b > static_cast<std::int64_t>(max_k_)) {
      return binomial_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    const std::uint64_t v = table_[static_cast<std::size_t>(a) * (max_k_ + 1) + static_cast<std::size_t>(b)];
    if (v == kSaturated) fail(Errc::Overflow, "binomial table entry exceeds 64 bits");
    return v;
  }

 private:
  static constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t& at(std::uint32_t a, std::uint32_t b) {
    return table_[static_cast<std::size_t>(a) * (max_k_ + 1) + b];
  }

  std::uint32_t max_n_ = 0;
  std::uint32_t max_k_ = 0;
  std::vector<std::uint64_t> table_;
};

/// A strictly increasing sequence of at most kMaxDegree 1-based file indices.
class DTuple {
 public:
  DTuple() = default;

  DTuple(std::initializer_list<int> elements) {
    std::vector<std::uint32_t> v(elements.begin(), elements.end());
    assign(v);
  }

  explicit DTuple(std::span<const std::uint32_t> elements) { assign(elements); }

  /// Builds without validation. Callers guarantee the invariants.
  static DTuple unchecked(std::span<const FileIndex> elements) {
    DTuple t;
    t.size_ = static_cast<std::uint8_t>(elements.size());
    std::copy(elements.begin(), elements.end(), t.data_.begin());
    return t;
  }

  std::size_t size() const noexcept { return size_; }
  FileIndex operator[](std::size_t i) const noexcept { return data_[i]; }
  FileIndex& operator[](std::size_t i) noexcept { return data_[i]; }
  const FileIndex* begin() const noexcept { return data_.data(); }
  const FileIndex* end() const noexcept { return data_.data() + size_; }
  FileIndex front() const noexcept { return data_[0]; }
  FileIndex back() const noexcept { return data_[size_ - 1]; }
  std::span<const FileIndex> elements() const noexcept { return {data_.data(), size_}; }

  bool contains(std::uint32_t x) const noexcept {
    return std::binary_search(begin(), end(), static_cast<FileIndex>(x));
  }

  /// True when the tuple is a d-subset of [n].
  bool valid_for(std::uint32_t n, std::uint32_t d) const noexcept {
    return size_ == d && size_ > 0 && data_[0] >= 1 && data_[size_ - 1] <= n;
  }

  friend bool operator==(const DTuple& a, const DTuple& b) noexcept {
    return std::equal(a.begin(), a.end(), b.begin(), b.end());
  }
  friend std::strong_ordering operator<=>(const DTuple& a, const DTuple& b) noexcept {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < size_; ++i) {
      if (i) out += ',';
      out += std::to_string(data_[i]);
    }
    return out + "}";
  }

 private:
  void assign(std::span<const std::uint32_t> v) {
    if (v.empty() || v.size() > kMaxDegree) {
      fail(Errc::InvalidDimensions, "tuple length must be in [1, " + std::to_string(kMaxDegree) + "]");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 1 || v[i] > kMaxFiles) fail(Errc::IndexOutOfBounds, "file index out of range");
      if (i > 0 && v[i] <= v[i - 1]) fail(Errc::InvalidDimensions, "tuple must be strictly increasing");
      data_[i] = static_cast<FileIndex>(v[i]);
    }
    size_ = static_cast<std::uint8_t>(v.size());
  }

  std::array<FileIndex, kMaxDegree> data_{};
  std::uint8_t size_ = 0;
};

inline void check_dimensions(std::uint64_t n, std::uint64_t d) {
  if (d == 0 || d > n) {
    fail(Errc::InvalidDimensions, "need 1 <= d <= n, got n=" + std::to_string(n) + " d=" + std::to_string(d));
  }
  if (d > kMaxDegree) fail(Errc::InvalidDimensions, "d exceeds " + std::to_string(kMaxDegree));
  if (n > kMaxFiles) fail(Errc::InvalidDimensions, "n exceeds " + std::to_string(kMaxFiles));
}

/// First d-subset of [n] in lexicographic order: {1, ..., d}.
inline DTuple first_lex(std::uint32_t n, std::uint32_t d) {
  check_dimensions(n, d);
  std::array<FileIndex, kMaxDegree> buf{};
  for (std::uint32_t i = 0; i < d; ++i) buf[i] = static_cast<FileIndex>(i + 1);
  return DTuple::unchecked({buf.data(), d});
}

/// Advances t to its lexicographic successor among d-subsets of [n].
/// Returns false (leaving t unspecified) when t was the last one.
inline bool next_lex(DTuple& t, std::uint32_t n) noexcept {
  const std::size_t d = t.size();
  std::size_t i = d;
  while (i > 0) {
    --i;
    if (t[i] < n - (d - 1 - i)) {
      ++t[i];
      for (std::size_t j = i + 1; j < d; ++j) t[j] = static_cast<FileIndex>(t[j - 1] + 1);
      return true;
    }
  }
  return false;
}

/// Streaming view over all d-subsets of [n] in lexicographic order.
class LexTuples {
 public:
  class iterator {
   public:
    using value_type = DTuple;
    using difference_type = std::ptrdiff_t;
    using reference = const DTuple&;
    using pointer = const DTuple*;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;
    iterator(DTuple t, std::uint32_t n) : current_(t), n_(n), done_(false) {}

    reference operator*() const noexcept { return current_; }
    pointer operator->() const noexcept { return &current_; }
    iterator& operator++() noexcept {
      done_ = !next_lex(current_, n_);
      return *this;
    }
    void operator++(int) noexcept { ++*this; }
    friend bool operator==(const iterator& a, const iterator& b) noexcept {
      return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_);
    }

   private:
    DTuple current_;
    std::uint32_t n_ = 0;
    bool done_ = true;
  };

  LexTuples(std::uint32_t n, std::uint32_t d) : first_(first_lex(n, d)), n_(n) {}

  iterator begin() const { return iterator(first_, n_); }
  iterator end() const { return iterator(); }

 private:
  DTuple first_;
  std::uint32_t n_;
};

/// Materialized lexicographic enumeration; prefer LexTuples for large inputs.
inline std::vector<DTuple> enumerate_lex(std::uint32_t n, std::uint32_t d) {
  std::vector<DTuple> out;
  for (const DTuple& t : LexTuples(n, d)) out.push_back(t);
  return out;
}

/// 1-based lexicographic rank of t among the d-subsets of [n].
template <class Count>
Count lex_rank_as(const DTuple& t, std::uint32_t n) {
  const std::uint64_t d = t.size();
  if (!t.valid_for(n, static_cast<std::uint32_t>(d))) fail(Errc::RankOutOfRange, "tuple is not a subset of [n]");
  Count rank = 1;
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < d; ++i) {
    // Tuples agreeing on the first i entries with a smaller (i+1)-th entry v
    // in (prev, t_i): sum over v of C(n - v, d - i - 1) by the hockey stick.
    const std::uint64_t rest = d - i - 1;
    const std::uint64_t lo = prev + 1;
    const std::uint64_t hi = t[i];
    if (hi > lo) rank += binomial_as<Count>(n - lo + 1, rest + 1) - binomial_as<Count>(n - hi + 1, rest + 1);
    prev = hi;
  }
  return rank;
}

/// Inverse of lex_rank_as for 1 <= rank <= C(n, d).
template <class Count>
DTuple lex_unrank_as(Count rank, std::uint32_t n, std::uint32_t d) {
  check_dimensions(n, d);
  if (rank < 1 || rank > binomial_as<Count>(n, d)) fail(Errc::RankOutOfRange, "rank outside [1, C(n,d)]");
  Count remaining = rank - 1;
  std::array<FileIndex, kMaxDegree> buf{};
  std::uint32_t v = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    for (;; ++v) {
      const Count block = binomial_as<Count>(n - v, d - i - 1);
      if (remaining < block) break;
      remaining -= block;
    }
    buf[i] = static_cast<FileIndex>(v);
    ++v;
  }
  return DTuple::unchecked({buf.data(), d});
}

inline BigCount lex_rank(const DTuple& t, std::uint32_t n) { return lex_rank_as<BigCount>(t, n); }
inline DTuple lex_unrank(const BigCount& rank, std::uint32_t n, std::uint32_t d) {
  return lex_unrank_as<BigCount>(rank, n, d);
}

}  // namespace icalloc

#endif  // ICALLOC_COMBINATORICS_HPP
