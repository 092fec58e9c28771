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

#ifndef ICALLOC_PARTITION_HPP
#define ICALLOC_PARTITION_HPP

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "icalloc/combinatorics.hpp"

namespace icalloc {

/// Sorted set of distinct file indices.
using FileSet = std::vector<FileIndex>;

/// alpha(group): the distinct files touched by a set of tuples.
inline FileSet footprint(std::span<const DTuple> tuples) {
  FileSet out;
  for (const DTuple& t : tuples) out.insert(out.end(), t.begin(), t.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline bool is_subset(const FileSet& inner, const FileSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

/// N task groups and the files placed at each worker. Groups are 0-based in
/// memory; worker b in the text formats is groups[b - 1].
struct Partition {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::vector<std::vector<DTuple>> groups;
  std::vector<FileSet> placement;

  std::size_t workers() const noexcept { return groups.size(); }

  std::size_t task_count() const noexcept {
    std::size_t total = 0;
    for (const auto& g : groups) total += g.size();
    return total;
  }

  /// Builds a partition whose placement is exactly each group's footprint.
  static Partition with_footprints(std::uint32_t n, std::uint32_t d, std::vector<std::vector<DTuple>> groups) {
    Partition p{n, d, std::move(groups), {}};
    p.placement.reserve(p.groups.size());
    for (const auto& g : p.groups) p.placement.push_back(footprint(g));
    return p;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

}  // namespace icalloc

#endif  // ICALLOC_PARTITION_HPP
