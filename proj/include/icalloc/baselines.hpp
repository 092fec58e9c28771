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

#ifndef ICALLOC_BASELINES_HPP
#define ICALLOC_BASELINES_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "icalloc/combinatorics.hpp"
#include "icalloc/error.hpp"
#include "icalloc/partition.hpp"
#include "icalloc/random.hpp"
#include "icalloc/task_set.hpp"

namespace icalloc {

struct ThinningSpec {
  double phi = 1.0;
  std::uint64_t seed = 0;
  std::string generator_id = kGeneratorId;
};

inline void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) fail(Errc::InvalidPhi, "phi must lie in [0, 1]");
}

/// Keeps tuple `rank` (1-based lex rank) of A_{n,d} under `spec`.
inline bool keeps(const ThinningSpec& spec, std::uint64_t rank) noexcept {
  if (spec.phi >= 1.0) return true;
  return unit_interval(keyed_draw(spec.seed, rank)) < spec.phi;
}

/// Random thinning of A_{n,d}: each tuple survives independently with probability phi.
inline TaskSet thin(std::uint32_t n, std::uint32_t d, const ThinningSpec& spec) {
  check_phi(spec.phi);
  check_dimensions(n, d);
  if (spec.generator_id != kGeneratorId) fail(Errc::SchemaError, "unknown generator_id " + spec.generator_id);
  std::vector<DTuple> kept;
  std::uint64_t rank = 0;
  if (spec.phi > 0.0) {
    for (const DTuple& t : LexTuples(n, d)) {
      if (keeps(spec, ++rank)) kept.push_back(t);
    }
  }
  return TaskSet::from_sorted(n, d, std::move(kept), TaskMetadata{spec.phi, spec.seed, spec.generator_id});
}

/// Contiguous split of X in lex order; the first |X| mod N groups get one extra tuple.
inline Partition lex_partition(const TaskSet& tasks, std::uint64_t workers) {
  if (workers == 0) fail(Errc::InvalidDimensions, "N must be at least 1");
  const auto& edges = tasks.edges();
  const std::uint64_t base = edges.size() / workers;
  const std::uint64_t extra = edges.size() % workers;
  std::vector<std::vector<DTuple>> groups(workers);
  std::size_t pos = 0;
  for (std::uint64_t b = 0; b < workers; ++b) {
    const std::uint64_t len = base + (b < extra ? 1 : 0);
    groups[b].assign(edges.begin() + pos, edges.begin() + pos + len);
    pos += len;
  }
  return Partition::with_footprints(tasks.n(), tasks.d(), std::move(groups));
}

/// Each tuple goes to a group drawn uniformly from [N], keyed by (seed, position in X).
inline Partition random_partition(const TaskSet& tasks, std::uint64_t workers, std::uint64_t seed) {
  if (workers == 0) fail(Errc::InvalidDimensions, "N must be at least 1");
  std::vector<std::vector<DTuple>> groups(workers);
  std::uint64_t index = 0;
  for (const DTuple& t : tasks.edges()) groups[bounded(keyed_draw(seed, ++index), workers)].push_back(t);
  return Partition::with_footprints(tasks.n(), tasks.d(), std::move(groups));
}

}  // namespace icalloc

#endif  // ICALLOC_BASELINES_HPP
