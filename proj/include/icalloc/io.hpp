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

#ifndef ICALLOC_IO_HPP
#define ICALLOC_IO_HPP

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "icalloc/design.hpp"
#include "icalloc/error.hpp"
#include "icalloc/harness.hpp"
#include "icalloc/metrics.hpp"
#include "icalloc/params.hpp"
#include "icalloc/partition.hpp"
#include "icalloc/task_set.hpp"

namespace icalloc {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------- task files

namespace detail {

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline std::vector<std::uint64_t> parse_integers(std::string_view text, std::size_t line) {
  std::vector<std::uint64_t> out;
  std::istringstream in{std::string(text)};
  std::string token;
  while (in >> token) {
    std::uint64_t value = 0;
    std::size_t used = 0;
    try {
      if (token.empty() || token[0] == '-' || token[0] == '+') throw std::invalid_argument(token);
      value = std::stoull(token, &used);
    } catch (const std::exception&) {
      parse_fail(line, "expected a non-negative integer, got '" + token + "'");
    }
    if (used != token.size()) parse_fail(line, "expected a non-negative integer, got '" + token + "'");
    out.push_back(value);
  }
  return out;
}

/// Shortest %g rendering that reads back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  for (int digits = 6; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void read_metadata(std::string_view comment, std::size_t line, TaskMetadata& meta) {
  std::istringstream in{std::string(comment)};
  std::string key, value, extra;
  if (!(in >> key >> value) || (in >> extra)) return;
  try {
    if (key == "phi") {
      meta.phi = std::stod(value);
    } else if (key == "seed") {
      meta.seed = std::stoull(value);
    } else if (key == "generator_id") {
      meta.generator_id = value;
    } else if (key == "format_version" && std::stoi(value) != kFormatVersion) {
      parse_fail(line, "unsupported format_version " + value);
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(line, "bad value for " + key);
  }
}

}  // namespace detail

/// Task-set text: header `n d m`, then m lines of d ascending indices. `#` starts a
/// comment; `# key value` comments carry phi, seed and generator_id.
inline TaskSet parse_tasks(std::string_view text) {
  TaskMetadata meta;
  std::optional<std::vector<std::uint64_t>> header;
  std::vector<DTuple> edges;
  std::size_t header_line = 0;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      detail::read_metadata(line.substr(hash + 1), line_no, meta);
      line = line.substr(0, hash);
    }
    const auto values = detail::parse_integers(line, line_no);
    if (values.empty()) continue;
    if (!header) {
      if (values.size() != 3) detail::parse_fail(line_no, "header must be 'n d m'");
      if (values[0] > kMaxFiles || values[1] < 1 || values[1] > kMaxDegree || values[1] > values[0]) {
        detail::parse_fail(line_no, "header needs 1 <= d <= 8 and d <= n <= 65535");
      }
      header = values;
      header_line = line_no;
      continue;
    }
    const auto n = (*header)[0];
    const auto d = (*header)[1];
    if (values.size() != d) detail::parse_fail(line_no, "expected " + std::to_string(d) + " indices");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < 1 || values[i] > n) {
        fail(Errc::IndexOutOfBounds, "line " + std::to_string(line_no) + ": index " + std::to_string(values[i]) +
                                         " outside [1, " + std::to_string(n) + "]");
      }
      if (i > 0 && values[i] <= values[i - 1]) detail::parse_fail(line_no, "indices must be strictly ascending");
    }
    std::vector<std::uint32_t> idx(values.begin(), values.end());
    edges.emplace_back(std::span<const std::uint32_t>(idx));
  }
  if (!header) detail::parse_fail(line_no, "missing 'n d m' header");
  if (edges.size() != (*header)[2]) {
    detail::parse_fail(header_line, "header announces " + std::to_string((*header)[2]) + " edges, found " +
                                        std::to_string(edges.size()));
  }
  return TaskSet(static_cast<std::uint32_t>((*header)[0]), static_cast<std::uint32_t>((*header)[1]),
                 std::move(edges), meta);
}

inline std::string emit_tasks(const TaskSet& tasks) {
  std::ostringstream out;
  out << "# format_version " << kFormatVersion << "\n";
  const TaskMetadata& meta = tasks.metadata();
  if (meta.phi) {
    out << "# phi " << detail::shortest(*meta.phi) << "\n";
  }
  if (meta.seed) out << "# seed " << *meta.seed << "\n";
  if (meta.generator_id) out << "# generator_id " << *meta.generator_id << "\n";
  out << tasks.n() << ' ' << tasks.d() << ' ' << tasks.size() << "\n";
  for (const DTuple& t : tasks.edges()) {
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << t[i];
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- partitions

/// A partition as stored on disk. `params` is absent for baseline partitions.
struct PartitionDocument {
  Partition partition;
  std::optional<ICParameters> params;
  TaskMetadata metadata;

  std::string label() const { return params ? std::string(to_string(params->design_case)) : "baseline"; }

  static PartitionDocument from(const FinalPartition& p) { return {p.partition, p.params, p.metadata}; }

  FinalPartition to_final() const {
    if (!params) fail(Errc::SchemaError, "baseline partition carries no construction parameters");
    return {*params, partition, metadata};
  }

  friend bool operator==(const PartitionDocument&, const PartitionDocument&) = default;
};

namespace detail {

inline Json tuple_json(const DTuple& t) {
  Json a = Json::array();
  for (FileIndex x : t) a.push_back(x);
  return a;
}

inline const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) fail(Errc::SchemaError, std::string("missing key '") + key + "'");
  return obj.at(key);
}

template <class T>
T require_as(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(Errc::SchemaError, std::string("key '") + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_as(const Json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return require_as<T>(obj, key);
}

inline Json metadata_json(const TaskMetadata& m) {
  Json j = Json::object();
  j["phi"] = m.phi ? Json(*m.phi) : Json(nullptr);
  j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
  j["generator_id"] = m.generator_id ? Json(*m.generator_id) : Json(nullptr);
  return j;
}

inline TaskMetadata metadata_from(const Json& j) {
  if (!j.is_object()) fail(Errc::SchemaError, "metadata must be an object");
  return {optional_as<double>(j, "phi"), optional_as<std::uint64_t>(j, "seed"),
          optional_as<std::string>(j, "generator_id")};
}

inline Json params_json(const ICParameters& p) {
  Json j = Json::object();
  j["k"] = p.k;
  j["f"] = p.f;
  j["s"] = p.s;
  j["s0"] = p.s0;
  j["g"] = p.g;
  j["n_prime"] = p.n_prime;
  j["base_groups"] = p.base_groups;
  j["q"] = p.q;
  j["p"] = p.p;
  j["r"] = p.r;
  j["capped"] = p.capped;
  return j;
}

inline ICParameters params_from(const Json& j, std::uint32_t n, std::uint32_t d, std::uint64_t workers,
                                const std::string& label) {
  ICParameters p;
  p.n = n;
  p.d = d;
  p.workers = workers;
  if (label == "divisible") {
    p.design_case = DesignCase::Divisible;
  } else if (label == "non_divisible") {
    p.design_case = DesignCase::NonDivisible;
  } else {
    fail(Errc::SchemaError, "unknown case '" + label + "'");
  }
  p.k = require_as<std::uint32_t>(j, "k");
  p.f = require_as<std::uint32_t>(j, "f");
  p.s = require_as<std::uint32_t>(j, "s");
  p.s0 = require_as<std::uint32_t>(j, "s0");
  p.g = require_as<std::uint32_t>(j, "g");
  p.n_prime = require_as<std::uint32_t>(j, "n_prime");
  p.base_groups = require_as<std::uint64_t>(j, "base_groups");
  p.q = require_as<std::uint64_t>(j, "q");
  p.p = require_as<std::uint64_t>(j, "p");
  p.r = require_as<std::uint64_t>(j, "r");
  p.capped = require_as<bool>(j, "capped");
  return p;
}

inline DTuple tuple_from(const Json& j, std::uint32_t n, std::uint32_t d) {
  if (!j.is_array() || j.size() != d) fail(Errc::SchemaError, "edge must be an array of d indices");
  std::vector<std::uint32_t> xs;
  for (const Json& v : j) {
    if (!v.is_number_unsigned()) fail(Errc::SchemaError, "file index must be a positive integer");
    const auto x = v.get<std::uint64_t>();
    if (x < 1 || x > n) fail(Errc::IndexOutOfBounds, "file index " + std::to_string(x) + " outside [1, n]");
    if (!xs.empty() && x <= xs.back()) fail(Errc::SchemaError, "edge indices must be strictly ascending");
    xs.push_back(static_cast<std::uint32_t>(x));
  }
  return DTuple(std::span<const std::uint32_t>(xs));
}

}  // namespace detail

inline Json partition_json(const PartitionDocument& doc) {
  const Partition& p = doc.partition;
  Json j = Json::object();
  j["format_version"] = kFormatVersion;
  j["n"] = p.n;
  j["d"] = p.d;
  j["N"] = p.workers();
  j["case"] = doc.label();
  j["params"] = doc.params ? detail::params_json(*doc.params) : Json(nullptr);
  Json groups = Json::array();
  for (const auto& g : p.groups) {
    Json group = Json::array();
    for (const DTuple& t : g) group.push_back(detail::tuple_json(t));
    groups.push_back(std::move(group));
  }
  j["groups"] = std::move(groups);
  Json footprints = Json::array();
  for (const FileSet& files : p.placement) footprints.push_back(files);
  j["footprints"] = std::move(footprints);
  j["metadata"] = detail::metadata_json(doc.metadata);
  return j;
}

/// One key per line and one group or footprint per line.
inline std::string emit_partition(const PartitionDocument& doc) {
  const Json j = partition_json(doc);
  std::string out = "{\n";
  bool first_key = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    out += first_key ? " " : ",\n ";
    first_key = false;
    out += Json(it.key()).dump() + ": ";
    if ((it.key() == "groups" || it.key() == "footprints") && !it.value().empty()) {
      out += "[\n";
      for (std::size_t i = 0; i < it.value().size(); ++i) out += (i ? ",\n  " : "  ") + it.value()[i].dump();
      out += "\n ]";
    } else {
      out += it.value().dump();
    }
  }
  return out + "\n}\n";
}
inline std::string emit_partition(const FinalPartition& p) { return emit_partition(PartitionDocument::from(p)); }

inline PartitionDocument parse_partition(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::SchemaError, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(Errc::SchemaError, "partition document must be an object");
  if (const auto version = detail::optional_as<int>(j, "format_version"); version && *version != kFormatVersion) {
    fail(Errc::SchemaError, "unsupported format_version " + std::to_string(*version));
  }
  const auto n = detail::require_as<std::uint32_t>(j, "n");
  const auto d = detail::require_as<std::uint32_t>(j, "d");
  const auto workers = detail::require_as<std::uint64_t>(j, "N");
  const auto label = detail::require_as<std::string>(j, "case");
  try {
    check_dimensions(n, d);
  } catch (const Error& e) {
    fail(Errc::SchemaError, e.what());
  }

  PartitionDocument doc;
  doc.partition.n = n;
  doc.partition.d = d;
  const Json& params = detail::require(j, "params");
  if (label != "baseline") {
    if (params.is_null()) fail(Errc::SchemaError, "construction partition without params");
    doc.params = detail::params_from(params, n, d, workers, label);
  }
  const Json& groups = detail::require(j, "groups");
  const Json& footprints = detail::require(j, "footprints");
  if (!groups.is_array() || groups.size() != workers) fail(Errc::SchemaError, "groups must list N groups");
  if (!footprints.is_array() || footprints.size() != workers) fail(Errc::SchemaError, "footprints must list N sets");
  for (const Json& g : groups) {
    if (!g.is_array()) fail(Errc::SchemaError, "group must be an array of edges");
    auto& out = doc.partition.groups.emplace_back();
    for (const Json& t : g) out.push_back(detail::tuple_from(t, n, d));
  }
  for (const Json& f : footprints) {
    if (!f.is_array()) fail(Errc::SchemaError, "footprint must be an array of file indices");
    auto& out = doc.partition.placement.emplace_back();
    for (const Json& v : f) {
      if (!v.is_number_unsigned()) fail(Errc::SchemaError, "file index must be a positive integer");
      const auto x = v.get<std::uint64_t>();
      if (x < 1 || x > n) fail(Errc::IndexOutOfBounds, "file index " + std::to_string(x) + " outside [1, n]");
      if (!out.empty() && x <= out.back()) fail(Errc::SchemaError, "footprint must be strictly ascending");
      out.push_back(static_cast<FileIndex>(x));
    }
  }
  doc.metadata = detail::metadata_from(detail::require(j, "metadata"));
  return doc;
}

// ---------------------------------------------------------------- reports

inline Json report_json(const CostReport& r) {
  Json j = Json::object();
  j["pi"] = r.pi;
  j["pi_placement"] = r.pi_placement;
  j["delta"] = r.delta;
  j["base_delta"] = r.base_delta;
  j["arf"] = r.arf;
  j["phi"] = r.phi;
  j["pi_lb"] = r.pi_lb.value;
  j["pi_lb_ceil"] = r.pi_lb.integer_bound;
  j["gap"] = r.gap;
  Json promised = Json::array();
  for (const PromisedBound& b : r.promised) {
    promised.push_back({{"name", b.name},
                        {"bound", b.bound},
                        {"achieved", b.achieved},
                        {"applicable", b.applicable},
                        {"satisfied", b.satisfied},
                        {"probabilistic", b.probabilistic}});
  }
  j["promised"] = std::move(promised);
  j["bounds_ok"] = r.bounds_ok();
  return j;
}

// ---------------------------------------------------------------- grids and CSV

/// Grid document: {"n": [...], "d": [...], "N": [...], "phi": [...], "seeds": [...]}.
/// phi defaults to [1.0] and seeds to [0].
inline GridSpec parse_grid(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::SchemaError, std::string("not valid JSON: ") + e.what());
  }
  GridSpec grid;
  grid.n = detail::require_as<std::vector<std::uint32_t>>(j, "n");
  grid.d = detail::require_as<std::vector<std::uint32_t>>(j, "d");
  grid.workers = detail::require_as<std::vector<std::uint64_t>>(j, "N");
  if (auto phi = detail::optional_as<std::vector<double>>(j, "phi")) grid.phi = *phi;
  if (auto seeds = detail::optional_as<std::vector<std::uint64_t>>(j, "seeds")) grid.seeds = *seeds;
  return grid;
}

inline constexpr std::string_view kSweepCsvHeader =
    "n,d,N,phi,seed,case,k,s,g,pi,pi_lb,gap,delta,delta_X,arf,bounds_ok";

namespace detail {

inline std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace detail

/// Skipped points keep their coordinates and leave the measured columns empty.
inline std::string sweep_csv_row(const SweepRecord& r) {
  std::ostringstream out;
  out << r.n << ',' << r.d << ',' << r.workers << ',' << detail::real(r.phi) << ',' << r.seed << ',' << r.design_case;
  if (r.skipped()) {
    out << ",,,,,,,,,,";
  } else {
    out << ',' << r.k << ',' << r.s_or_s0 << ',' << r.g << ',' << r.pi << ',' << detail::real(r.pi_lb) << ','
        << detail::real(r.gap) << ',' << detail::real(r.delta) << ',' << detail::real(r.delta_x) << ','
        << detail::real(r.arf) << ',' << (r.bounds_ok ? "true" : "false");
  }
  return out.str();
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepCsvHeader << "\n";
  for (const SweepRecord& r : records) out << sweep_csv_row(r) << "\n";
}

}  // namespace icalloc

#endif  // ICALLOC_IO_HPP
