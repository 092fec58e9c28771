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

// Command-line front end. Machine-readable output goes to stdout, diagnostics
// to stderr. Exit codes: 0 success, 1 a check failed, 2 bad input or usage.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icalloc.hpp"

namespace {

using namespace icalloc;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void warn_outside_range(const ICParameters& params) {
  if (!params.within_recommended_range()) {
    std::cerr << "warning: d=" << params.d << " is outside the recommended range 2 <= d <= n/32 (n=" << params.n
              << "); guarantees on balance may not apply\n";
  }
}

double density_of(const TaskSet& tasks) {
  return static_cast<double>(tasks.size()) / binomial(tasks.n(), tasks.d()).convert_to<double>();
}

/// phi recorded with the tasks, else the observed density.
double phi_for(const TaskMetadata& meta, std::uint64_t count, std::uint32_t n, std::uint32_t d) {
  if (meta.phi) return *meta.phi;
  return static_cast<double>(count) / binomial(n, d).convert_to<double>();
}

FinalPartition build_final(std::uint32_t n, std::uint32_t d, std::uint64_t workers, const TaskSet* tasks) {
  const ICParameters params = derive_parameters(n, d, workers);
  warn_outside_range(params);
  if (binomial(n, d) <= kDefaultMaterializationCap && workers <= kDefaultMaterializationCap) {
    const BasePartition base = build_base_partition(params);
    return refine(base, tasks ? *tasks : TaskSet::full(n, d));
  }
  if (!tasks) fail(Errc::InstanceTooLarge, "C(n,d) too large to partition all of A_{n,d}; pass --tasks");
  std::cerr << "note: C(n,d) exceeds the materialization cap; assigning tuples in closed form\n";
  return refine_streaming(Assigner(params), *tasks);
}

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

std::vector<Check> verify_document(const PartitionDocument& doc) {
  std::vector<Check> checks;
  const Partition& p = doc.partition;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };

  std::vector<DTuple> all;
  for (const auto& g : p.groups) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  const bool disjoint = std::adjacent_find(all.begin(), all.end()) == all.end();
  add("groups_pairwise_disjoint", disjoint);

  bool feasible = true;
  std::string bad;
  for (std::size_t b = 0; b < p.workers(); ++b) {
    if (!is_subset(footprint(p.groups[b]), p.placement[b])) {
      feasible = false;
      bad = "worker " + std::to_string(b + 1);
      break;
    }
  }
  add("footprint_within_placement", feasible, bad);

  if (!doc.params) return checks;
  const ICParameters& params = *doc.params;
  ICParameters expected;
  try {
    expected = derive_parameters(p.n, p.d, p.workers());
  } catch (const Error& e) {
    add("parameters_supported", false, e.what());
    return checks;
  }
  add("parameters_match", expected == params);
  if (!(expected == params)) return checks;

  const Assigner assigner(params);
  std::uint64_t misplaced = 0;
  for (std::size_t b = 0; b < p.workers(); ++b) {
    for (const DTuple& t : p.groups[b]) {
      if (assigner(t) != b + 1) ++misplaced;
    }
  }
  add("tuples_in_assigned_group", misplaced == 0, std::to_string(misplaced) + " misplaced");

  bool placement_ok = true;
  for (std::size_t b = 0; b < p.workers() && placement_ok; ++b) {
    placement_ok = p.placement[b] == group_footprint(assigner, b + 1);
  }
  add("placement_is_base_footprint", placement_ok);

  const double phi = phi_for(doc.metadata, p.task_count(), p.n, p.d);
  const CostReport report = full_report(p, params, phi);
  for (const PromisedBound& b : report.promised) {
    if (!b.applicable || b.probabilistic) continue;
    std::ostringstream detail;
    detail << "achieved " << b.achieved << ", bound " << b.bound;
    add(b.name, b.satisfied, detail.str());
  }
  return checks;
}

std::vector<double> parse_phi_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(Errc::InvalidPhi, "bad phi value '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind file placement and task allocation for d-uniform task sets"};
  app.require_subcommand(1);

  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t workers = 0;
  double phi = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 200;
  std::uint64_t rounds = 1;
  std::uint64_t edge_cap = kDefaultEdgeCap;
  std::string tasks_path, out_path, partition_path, grid_path, phi_list;

  auto* partition = app.add_subcommand("partition", "Build the placement and task groups");
  partition->add_option("--n", n, "number of files")->required();
  partition->add_option("--d", d, "files per task")->required();
  partition->add_option("--workers", workers, "number of workers N")->required();
  partition->add_option("--tasks", tasks_path, "task file (default: every d-subset)");
  partition->add_option("--out", out_path, "output file (default: stdout)");

  auto* thin_cmd = app.add_subcommand("thin", "Sample a task set by random thinning");
  thin_cmd->add_option("--n", n)->required();
  thin_cmd->add_option("--d", d)->required();
  thin_cmd->add_option("--phi", phi)->required();
  thin_cmd->add_option("--seed", seed)->required();
  thin_cmd->add_option("--out", out_path);

  auto* eval = app.add_subcommand("eval", "Report costs and bounds of a partition");
  eval->add_option("--partition", partition_path)->required();
  eval->add_option("--tasks", tasks_path, "reassign this task set with the stored construction");

  auto* verify = app.add_subcommand("verify", "Check every invariant of a partition");
  verify->add_option("--partition", partition_path)->required();

  auto* brute = app.add_subcommand("bruteforce", "Exact optimal communication cost on a tiny instance");
  brute->add_option("--tasks", tasks_path)->required();
  brute->add_option("--workers", workers)->required();
  brute->add_option("--edge-cap", edge_cap);

  auto* mc = app.add_subcommand("montecarlo", "Empirical balance over random thinnings");
  mc->add_option("--n", n)->required();
  mc->add_option("--d", d)->required();
  mc->add_option("--workers", workers)->required();
  mc->add_option("--phi", phi)->required();
  mc->add_option("--trials", trials)->required();
  mc->add_option("--seed", seed)->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Bound-versus-achieved table over a parameter grid");
  sweep_cmd->add_option("--grid", grid_path)->required();
  sweep_cmd->add_option("--out", out_path);

  auto* simulate = app.add_subcommand("simulate", "Several task sets against one fixed placement");
  simulate->add_option("--n", n)->required();
  simulate->add_option("--d", d)->required();
  simulate->add_option("--workers", workers)->required();
  simulate->add_option("--rounds", rounds)->required();
  simulate->add_option("--phi-list", phi_list, "comma-separated phi per round, or one value for all")->required();
  simulate->add_option("--seed", seed)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*partition) {
      std::optional<TaskSet> tasks;
      if (!tasks_path.empty()) tasks = parse_tasks(read_file(tasks_path));
      if (tasks && (tasks->n() != n || tasks->d() != d)) fail(Errc::DimensionMismatch, "task file (n, d) differs");
      write_output(out_path, emit_partition(build_final(n, d, workers, tasks ? &*tasks : nullptr)));
    } else if (*thin_cmd) {
      write_output(out_path, emit_tasks(thin(n, d, {phi, seed, kGeneratorId})));
    } else if (*eval) {
      PartitionDocument doc = parse_partition(read_file(partition_path));
      if (!tasks_path.empty()) {
        const TaskSet tasks = parse_tasks(read_file(tasks_path));
        FinalPartition fin = refine_streaming(Assigner(doc.to_final().params), tasks);
        fin.partition.placement = doc.partition.placement;
        doc = PartitionDocument::from(fin);
      }
      const Partition& p = doc.partition;
      const double rho = phi_for(doc.metadata, p.task_count(), p.n, p.d);
      const CostReport report = doc.params ? full_report(p, *doc.params, rho) : evaluate(p, rho);
      Json out = report_json(report);
      out["case"] = doc.label();
      std::cout << out.dump(1) << "\n";
    } else if (*verify) {
      const PartitionDocument doc = parse_partition(read_file(partition_path));
      bool ok = true;
      Json out = Json::object();
      Json list = Json::array();
      for (const Check& c : verify_document(doc)) {
        ok = ok && c.ok;
        list.push_back({{"check", c.name}, {"ok", c.ok}, {"detail", c.detail}});
        if (!c.ok) std::cerr << "violation: " << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
      }
      out["checks"] = std::move(list);
      out["ok"] = ok;
      std::cout << out.dump(1) << "\n";
      return ok ? 0 : 1;
    } else if (*brute) {
      const TaskSet tasks = parse_tasks(read_file(tasks_path));
      const PiStar result = brute_force_pi_star(tasks, workers, edge_cap);
      Json out = Json::object();
      out["pi_star"] = result.pi_star;
      if (!tasks.empty()) {
        const PiLowerBound lb = pi_lower_bound(tasks.n(), tasks.d(), workers, std::min(1.0, density_of(tasks)));
        out["pi_lb"] = lb.value;
      }
      out["witness"] = partition_json({result.witness, std::nullopt, tasks.metadata()});
      std::cout << out.dump(1) << "\n";
    } else if (*mc) {
      const ICParameters params = derive_parameters(n, d, workers);
      warn_outside_range(params);
      const MonteCarloSummary s = monte_carlo_delta(n, d, workers, phi, trials, seed);
      Json out = Json::object();
      out["n"] = n;
      out["d"] = d;
      out["N"] = workers;
      out["phi"] = phi;
      out["trials"] = s.trials;
      out["successes"] = s.successes;
      out["fraction_delta_le_5"] = s.fraction_delta_le_5;
      out["min_delta_X"] = s.min_delta;
      out["mean_delta_X"] = s.mean_delta;
      out["max_delta_X"] = s.max_delta;
      out["phi_min"] = s.phi_min ? Json(*s.phi_min) : Json(nullptr);
      out["vacuous"] = s.vacuous;
      out["guarantee_applies"] = s.guarantee_applies;
      out["generator_id"] = kGeneratorId;
      std::cout << out.dump(1) << "\n";
    } else if (*sweep_cmd) {
      const std::vector<SweepRecord> records = sweep(parse_grid(read_file(grid_path)));
      std::ostringstream csv;
      write_sweep_csv(csv, records);
      write_output(out_path, csv.str());
      bool ok = true;
      for (const SweepRecord& r : records) {
        if (r.skipped()) {
          std::cerr << "skipped n=" << r.n << " d=" << r.d << " N=" << r.workers << ": " << r.skip_reason << "\n";
        } else if (!r.bounds_ok) {
          ok = false;
          std::cerr << "bound violated at n=" << r.n << " d=" << r.d << " N=" << r.workers << "\n";
        }
      }
      return ok ? 0 : 1;
    } else if (*simulate) {
      std::vector<double> phis = parse_phi_list(phi_list);
      if (phis.size() == 1) phis.assign(rounds, phis.front());
      if (phis.size() != rounds) fail(Errc::DimensionMismatch, "--phi-list needs one value or one per round");
      std::vector<ThinningSpec> specs;
      for (std::uint64_t i = 0; i < rounds; ++i) specs.push_back({phis[i], derive_seed(seed, i), kGeneratorId});
      warn_outside_range(derive_parameters(n, d, workers));
      const SimulationResult result = simulate_rounds(n, d, workers, specs);
      Json out = Json::object();
      Json list = Json::array();
      for (const RoundResult& r : result.rounds) {
        Json row = report_json(r.report);
        row["seed"] = r.spec.seed;
        row["tasks"] = r.partition.partition.task_count();
        list.push_back(std::move(row));
      }
      out["rounds"] = std::move(list);
      out["placement_identical"] = result.placement_identical;
      out["feasible"] = result.feasible;
      out["blind"] = result.blind();
      std::cout << out.dump(1) << "\n";
      return result.blind() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
