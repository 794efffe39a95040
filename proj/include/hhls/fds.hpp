#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhls/dfg.hpp"

namespace hhls {

struct Schedule {
  std::vector<int> starts;  // per operation index
  int lambda = 0;
  int makespan = 0;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Peak number of concurrently busy units per operation type.
using ResourceUsage = std::map<OpType, int>;

ResourceUsage resource_usage(const Dfg& dfg, const Schedule& schedule, const Latencies& latencies);

// Weighted resource cost: sum of weight[k] * R_k (missing weights count 1).
double resource_cost(const ResourceUsage& usage, const std::map<OpType, double>& weights = {});

// Empty string when the schedule respects dependences, the latency bound and
// frame containment; otherwise a description of the first violation.
std::string check_schedule(const Dfg& dfg, const Schedule& schedule, const Latencies& latencies);

// Distribution graphs indexed [type][cstep].
using DistributionGraphs = std::map<OpType, std::vector<double>>;

// Called after every frame/DG recomputation with the current graphs.
using DgObserver = std::function<void(const DistributionGraphs&)>;

// Latency-constrained force-directed scheduling. Throws Infeasible when lambda
// is below the critical path.
Schedule fds_schedule(const Dfg& dfg, int lambda, const Latencies& latencies,
                      const DgObserver& observer = {});

// Resource-constrained list scheduling; lambda of the result is its makespan.
Schedule list_schedule(const Dfg& dfg, const std::map<OpType, int>& resources,
                       const Latencies& latencies);

struct OracleResult {
  ResourceUsage usage;
  double cost = 0;
  Schedule schedule;
};

inline constexpr std::size_t kOracleMaxOps = 12;

// Exhaustive minimum of resource_cost over every lambda-feasible schedule.
// `shuffle_seed` permutes the order in which candidate steps are tried; the
// optimum must not depend on it.
OracleResult brute_force_min_resources(const Dfg& dfg, int lambda, const Latencies& latencies,
                                       const std::map<OpType, double>& weights = {},
                                       std::optional<std::uint64_t> shuffle_seed = std::nullopt);

struct LatencyPoint {
  int lambda = 0;
  Schedule schedule;
  ResourceUsage usage;
};

// Evenly spaced lambdas over [min_latency, max_useful_latency], rounded half
// up and deduplicated, each scheduled with fds_schedule.
std::vector<int> latency_points(const Dfg& dfg, const Latencies& latencies, int points = 4);
std::vector<LatencyPoint> explore_latencies(const Dfg& dfg, const Latencies& latencies,
                                            int points = 4);

// `.sched` text: a header, one "op <id> @ <cstep>" line per operation and a
// resources block.
std::string write_schedule(const Dfg& dfg, const Schedule& schedule, const ResourceUsage& usage);

}  // namespace hhls
