#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "moat/errors.hpp"
#include "moat/evolve.hpp"
#include "moat/objective.hpp"

namespace moat {

/// A scheduling instance: machines with per-operation duration and cost
/// tables, jobs as chains of globally indexed operations (job-major order),
/// per-job due dates and budgets.
struct GridInstance {
  struct Machine {
    std::vector<double> durations;  // indexed by global operation id
    std::vector<double> costs;
  };
  struct Job {
    std::vector<std::size_t> operations;  // chain order
    double due_date = 0.0;
    double budget = 0.0;
  };

  std::vector<Machine> machines;
  std::vector<std::vector<int>> admissible;  // per global operation id
  std::vector<Job> jobs;

  std::size_t operation_count() const { return admissible.size(); }
};

inline std::vector<std::string> validate_instance(const GridInstance& instance) {
  std::vector<std::string> violations;
  if (instance.machines.empty()) violations.push_back("machines: must not be empty");
  if (instance.jobs.empty()) violations.push_back("jobs: must not be empty");
  const std::size_t n = instance.operation_count();
  std::vector<int> referenced(n, 0);
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    if (instance.jobs[j].operations.empty()) {
      violations.push_back("jobs[" + std::to_string(j) + "]: job needs at least one operation");
    }
    for (std::size_t op : instance.jobs[j].operations) {
      if (op >= n) {
        violations.push_back("jobs[" + std::to_string(j) + "]: operation id out of range");
      } else {
        ++referenced[op];
      }
    }
  }
  for (std::size_t op = 0; op < n; ++op) {
    if (referenced[op] != 1) {
      violations.push_back("operations[" + std::to_string(op) +
                           "]: must belong to exactly one job");
    }
    if (instance.admissible[op].empty()) {
      violations.push_back("operations[" + std::to_string(op) +
                           "]: needs at least one admissible machine");
    }
    for (int m : instance.admissible[op]) {
      if (m < 0 || static_cast<std::size_t>(m) >= instance.machines.size()) {
        violations.push_back("operations[" + std::to_string(op) +
                             "]: admissible machine id out of range");
      }
    }
  }
  for (std::size_t m = 0; m < instance.machines.size(); ++m) {
    if (instance.machines[m].durations.size() != n || instance.machines[m].costs.size() != n) {
      violations.push_back("machines[" + std::to_string(m) +
                           "]: duration/cost tables must cover every operation");
      continue;
    }
  }
  if (violations.empty()) {
    for (std::size_t op = 0; op < n; ++op) {
      for (int m : instance.admissible[op]) {
        const auto& machine = instance.machines[static_cast<std::size_t>(m)];
        if (!(machine.durations[op] > 0.0) || !(machine.costs[op] > 0.0)) {
          violations.push_back("machines[" + std::to_string(m) + "]: duration and cost for operation " +
                               std::to_string(op) + " must be strictly positive");
        }
      }
    }
  }
  return violations;
}

inline void require_valid(const GridInstance& instance) {
  if (const auto violations = validate_instance(instance); !violations.empty()) {
    throw std::invalid_argument("grid instance: " + violations.front());
  }
}

struct JobBounds {
  double time_min = 0.0;
  double time_max = 0.0;
  double cost_min = 0.0;
  double cost_max = 0.0;
};

struct GridBounds {
  std::vector<JobBounds> jobs;
  double makespan_lower = 0.0;
  double makespan_upper = 0.0;
};

/// Critical-path style estimates: per job, the chain length under the
/// fastest/slowest admissible machine per operation, likewise for costs.
/// The makespan upper estimate divides the summed slowest job times by the
/// available parallelism, which cannot exceed the job count since a chain
/// runs sequentially.
inline GridBounds grid_bounds(const GridInstance& instance) {
  require_valid(instance);
  GridBounds bounds;
  std::size_t min_admissible = std::numeric_limits<std::size_t>::max();
  for (const auto& machines : instance.admissible) {
    min_admissible = std::min(min_admissible, machines.size());
  }
  double time_max_sum = 0.0;
  for (const auto& job : instance.jobs) {
    JobBounds jb;
    for (std::size_t op : job.operations) {
      double fastest = std::numeric_limits<double>::infinity();
      double slowest = 0.0;
      double cheapest = std::numeric_limits<double>::infinity();
      double costliest = 0.0;
      for (int m : instance.admissible[op]) {
        const auto& machine = instance.machines[static_cast<std::size_t>(m)];
        fastest = std::min(fastest, machine.durations[op]);
        slowest = std::max(slowest, machine.durations[op]);
        cheapest = std::min(cheapest, machine.costs[op]);
        costliest = std::max(costliest, machine.costs[op]);
      }
      jb.time_min += fastest;
      jb.time_max += slowest;
      jb.cost_min += cheapest;
      jb.cost_max += costliest;
    }
    bounds.makespan_lower = std::max(bounds.makespan_lower, jb.time_min);
    time_max_sum += jb.time_max;
    bounds.jobs.push_back(jb);
  }
  const std::size_t parallelism = std::max<std::size_t>(
      1, std::min(min_admissible, instance.jobs.size()));
  bounds.makespan_upper = time_max_sum / static_cast<double>(parallelism);
  return bounds;
}

struct GridSchedule {
  std::vector<double> start;   // per operation
  std::vector<double> finish;  // per operation
  std::vector<double> job_completion;
  std::vector<double> job_cost;
  double makespan = 0.0;
  double utilization = 0.0;
  int delayed_jobs = 0;
  double total_delay = 0.0;
};

/// List scheduling: operations are dispatched in priority order, skipping
/// ahead to the first operation whose chain predecessor is already placed;
/// each starts as soon as its predecessor has finished and its assigned
/// machine is free.
inline GridSchedule grid_schedule(const GridInstance& instance, const GridDecision& decision) {
  require_valid(instance);
  const std::size_t n = instance.operation_count();
  if (decision.assignment.size() != n) {
    throw std::invalid_argument("grid_schedule: assignment must cover every operation");
  }
  for (std::size_t op = 0; op < n; ++op) {
    const auto& machines = instance.admissible[op];
    if (std::find(machines.begin(), machines.end(), decision.assignment[op]) == machines.end()) {
      throw std::invalid_argument("grid_schedule: inadmissible assignment for operation " +
                                  std::to_string(op));
    }
  }
  if (decision.priority.size() != n) {
    throw std::invalid_argument("grid_schedule: malformed permutation");
  }
  std::vector<char> present(n, 0);
  for (std::size_t op : decision.priority) {
    if (op >= n || present[op]) throw std::invalid_argument("grid_schedule: malformed permutation");
    present[op] = 1;
  }

  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> predecessor(n, kNone);
  std::vector<std::size_t> job_of(n, 0);
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const auto& chain = instance.jobs[j].operations;
    for (std::size_t pos = 0; pos < chain.size(); ++pos) {
      job_of[chain[pos]] = j;
      if (pos > 0) predecessor[chain[pos]] = chain[pos - 1];
    }
  }

  GridSchedule schedule;
  schedule.start.assign(n, 0.0);
  schedule.finish.assign(n, 0.0);
  std::vector<double> machine_free(instance.machines.size(), 0.0);
  std::vector<char> scheduled(n, 0);
  for (std::size_t placed = 0; placed < n; ++placed) {
    std::size_t op = kNone;
    for (std::size_t candidate : decision.priority) {
      if (scheduled[candidate]) continue;
      if (predecessor[candidate] == kNone || scheduled[predecessor[candidate]]) {
        op = candidate;
        break;
      }
    }
    if (op == kNone) throw std::logic_error("grid_schedule: no dispatchable operation");
    const int m = decision.assignment[op];
    double start = machine_free[static_cast<std::size_t>(m)];
    if (predecessor[op] != kNone) start = std::max(start, schedule.finish[predecessor[op]]);
    schedule.start[op] = start;
    schedule.finish[op] = start + instance.machines[static_cast<std::size_t>(m)].durations[op];
    machine_free[static_cast<std::size_t>(m)] = schedule.finish[op];
    scheduled[op] = 1;
  }

  schedule.job_completion.assign(instance.jobs.size(), 0.0);
  schedule.job_cost.assign(instance.jobs.size(), 0.0);
  double busy = 0.0;
  for (std::size_t op = 0; op < n; ++op) {
    const auto& machine = instance.machines[static_cast<std::size_t>(decision.assignment[op])];
    schedule.job_completion[job_of[op]] =
        std::max(schedule.job_completion[job_of[op]], schedule.finish[op]);
    schedule.job_cost[job_of[op]] += machine.costs[op];
    schedule.makespan = std::max(schedule.makespan, schedule.finish[op]);
    busy += machine.durations[op];
  }
  schedule.utilization =
      busy / (static_cast<double>(instance.machines.size()) * schedule.makespan);
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const double delay = schedule.job_completion[j] - instance.jobs[j].due_date;
    if (delay > 0.0) {
      ++schedule.delayed_jobs;
      schedule.total_delay += delay;
    }
  }
  return schedule;
}

namespace detail {

// Per-job normalization against the critical-path estimates; a job with no
// freedom (degenerate bounds) contributes the neutral value 1.
inline double normalized_or_neutral(double value, double lo, double hi, Direction direction) {
  if (!(lo < hi)) return 1.0;
  ObjectiveSpec spec;
  spec.direction = direction;
  spec.lower_bound = lo;
  spec.upper_bound = hi;
  return normalize(value, spec);
}

}  // namespace detail

/// Objectives: mean normalized job time, mean normalized job cost (both
/// already in [0,1], maximize), raw makespan (minimize), utilization rate
/// (maximize, needs no bounds). Violations: delayed-job count and summed
/// delay against the due dates.
inline Evaluation grid_evaluate(const GridInstance& instance, const GridDecision& decision) {
  const GridSchedule schedule = grid_schedule(instance, decision);
  const GridBounds bounds = grid_bounds(instance);
  double time_sum = 0.0;
  double cost_sum = 0.0;
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    time_sum += detail::normalized_or_neutral(schedule.job_completion[j], bounds.jobs[j].time_min,
                                              bounds.jobs[j].time_max, Direction::Minimize);
    cost_sum += detail::normalized_or_neutral(schedule.job_cost[j], bounds.jobs[j].cost_min,
                                              bounds.jobs[j].cost_max, Direction::Minimize);
  }
  const double jobs = static_cast<double>(instance.jobs.size());
  return Evaluation{
      {time_sum / jobs, cost_sum / jobs, schedule.makespan, schedule.utilization},
      {static_cast<double>(schedule.delayed_jobs), schedule.total_delay}};
}

inline Evaluation grid_evaluate(const GridInstance& instance, const Decision& decision) {
  return grid_evaluate(instance, std::get<GridDecision>(decision));
}

/// Wraps an instance as a four-objective problem. The makespan bounds come
/// from grid_bounds; weights, priorities and thresholds are left at neutral
/// defaults for the experiment configuration to override.
inline ProblemDefinition make_grid_problem(GridInstance instance) {
  require_valid(instance);
  auto shared = std::make_shared<const GridInstance>(std::move(instance));
  const GridBounds bounds = grid_bounds(*shared);
  ProblemDefinition p;
  p.name = "grid";
  p.space = PermutationSpace{shared->admissible};
  p.objectives = {
      {.name = "job_time", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.25},
      {.name = "job_cost", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.25},
      {.name = "makespan", .direction = Direction::Minimize, .lower_bound = bounds.makespan_lower, .upper_bound = bounds.makespan_upper, .weight = 0.25},
      {.name = "utilization", .direction = Direction::Maximize, .lower_bound = 0.0, .upper_bound = 1.0, .weight = 0.25},
  };
  p.violation_labels = {"delayed_jobs", "total_delay"};
  p.evaluate = [shared](const Decision& d) { return grid_evaluate(*shared, d); };
  return p;
}

inline GridInstance parse_grid_instance(const nlohmann::json& j) {
  GridInstance instance;
  try {
    for (const auto& jm : j.at("machines")) {
      GridInstance::Machine machine;
      machine.durations = jm.at("durations").get<std::vector<double>>();
      machine.costs = jm.at("costs").get<std::vector<double>>();
      instance.machines.push_back(std::move(machine));
    }
    std::size_t next_op = 0;
    for (const auto& jj : j.at("jobs")) {
      GridInstance::Job job;
      job.due_date = jj.at("due_date").get<double>();
      job.budget = jj.value("budget", 0.0);
      for (const auto& jop : jj.at("operations")) {
        instance.admissible.push_back(jop.at("admissible").get<std::vector<int>>());
        job.operations.push_back(next_op++);
      }
      instance.jobs.push_back(std::move(job));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("grid instance: ") + e.what());
  }
  if (const auto violations = validate_instance(instance); !violations.empty()) {
    throw ConfigError("grid instance: " + violations.front());
  }
  return instance;
}

inline GridInstance load_grid_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid instance '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("grid instance '" + path.string() + "': " + e.what());
  }
  return parse_grid_instance(j);
}

}  // namespace moat
