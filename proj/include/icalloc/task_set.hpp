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

#ifndef ICALLOC_TASK_SET_HPP
#define ICALLOC_TASK_SET_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icalloc/combinatorics.hpp"

namespace icalloc {

/// Provenance of a generated task set. Absent fields were never recorded.
struct TaskMetadata {
  std::optional<double> phi;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> generator_id;

  friend bool operator==(const TaskMetadata&, const TaskMetadata&) = default;
};

/// A d-uniform hyperedge set X over files [n], kept in lexicographic order.
class TaskSet {
 public:
  TaskSet(std::uint32_t n, std::uint32_t d) : n_(n), d_(d) { check_dimensions(n, d); }

  /// Sorts the edges; rejects malformed or repeated edges.
  TaskSet(std::uint32_t n, std::uint32_t d, std::vector<DTuple> edges, TaskMetadata metadata = {})
      : n_(n), d_(d), edges_(std::move(edges)), metadata_(std::move(metadata)) {
    check_dimensions(n, d);
    for (const DTuple& e : edges_) {
      if (e.size() != d) fail(Errc::DimensionMismatch, "edge " + e.to_string() + " does not have d elements");
      if (!e.valid_for(n, d)) fail(Errc::IndexOutOfBounds, "edge " + e.to_string() + " not within [n]");
    }
    std::sort(edges_.begin(), edges_.end());
    const auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) fail(Errc::DuplicateEdge, "edge " + dup->to_string() + " appears twice");
  }

  /// The complete task set A_{n,d}.
  static TaskSet full(std::uint32_t n, std::uint32_t d) {
    TaskSet out(n, d);
    out.edges_ = enumerate_lex(n, d);
    return out;
  }

  /// Wraps edges that are already sorted, unique and valid.
  static TaskSet from_sorted(std::uint32_t n, std::uint32_t d, std::vector<DTuple> edges, TaskMetadata metadata = {}) {
    TaskSet out(n, d);
    out.edges_ = std::move(edges);
    out.metadata_ = std::move(metadata);
    return out;
  }

  std::uint32_t n() const noexcept { return n_; }
  std::uint32_t d() const noexcept { return d_; }
  const std::vector<DTuple>& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  const TaskMetadata& metadata() const noexcept { return metadata_; }
  TaskMetadata& metadata() noexcept { return metadata_; }

  bool contains(const DTuple& t) const { return std::binary_search(edges_.begin(), edges_.end(), t); }

  friend bool operator==(const TaskSet&, const TaskSet&) = default;

 private:
  std::uint32_t n_;
  std::uint32_t d_;
  std::vector<DTuple> edges_;
  TaskMetadata metadata_;
};

}  // namespace icalloc

#endif  // ICALLOC_TASK_SET_HPP
