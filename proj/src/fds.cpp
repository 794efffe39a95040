#include "hhls/fds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "hhls/error.hpp"

namespace hhls {

ResourceUsage resource_usage(const Dfg& dfg, const Schedule& schedule, const Latencies& latencies) {
  std::map<OpType, std::vector<int>> busy;
  for (std::size_t v = 0; v < dfg.ops.size(); ++v) {
    OpType k = dfg.ops[v].type;
    int end = schedule.starts[v] + latencies[k];
    auto& row = busy[k];
    if (static_cast<int>(row.size()) < end) row.resize(end, 0);
    for (int t = schedule.starts[v]; t < end; ++t) ++row[t];
  }
  ResourceUsage usage;
  for (const auto& [k, row] : busy) usage[k] = row.empty() ? 0 : *std::max_element(row.begin(), row.end());
  return usage;
}

double resource_cost(const ResourceUsage& usage, const std::map<OpType, double>& weights) {
  double cost = 0;
  for (const auto& [k, r] : usage) {
    auto it = weights.find(k);
    cost += (it == weights.end() ? 1.0 : it->second) * r;
  }
  return cost;
}

std::string check_schedule(const Dfg& dfg, const Schedule& schedule, const Latencies& latencies) {
  if (schedule.starts.size() != dfg.ops.size()) return "schedule size differs from operation count";
  DependenceGraph g(dfg);
  const auto bounds = time_bounds(dfg, latencies, schedule.lambda);
  int makespan = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const int s = schedule.starts[v];
    const int d = latencies[dfg.ops[v].type];
    const std::string name = "operation " + std::to_string(dfg.ops[v].id);
    if (s < bounds.asap[v] || s > bounds.alap[v])
      return name + " at step " + std::to_string(s) + " outside frame [" +
             std::to_string(bounds.asap[v]) + ", " + std::to_string(bounds.alap[v]) + "]";
    for (int p : g.preds(v))
      if (s < schedule.starts[p] + latencies[dfg.ops[p].type])
        return name + " starts before its operand " + std::to_string(dfg.ops[p].id) + " finishes";
    makespan = std::max(makespan, s + d);
  }
  if (makespan > schedule.lambda) return "makespan exceeds latency constraint";
  if (makespan != schedule.makespan) return "recorded makespan is wrong";
  return {};
}

namespace {

int makespan_of(const Dfg& dfg, const std::vector<int>& starts, const Latencies& latencies) {
  int out = 0;
  for (std::size_t v = 0; v < starts.size(); ++v)
    out = std::max(out, starts[v] + latencies[dfg.ops[v].type]);
  return out;
}

class ForceDirected {
 public:
  ForceDirected(const Dfg& dfg, int lambda, const Latencies& latencies)
      : dfg_(dfg), g_(dfg), lambda_(lambda), lat_(latencies), fixed_(g_.size(), -1),
        lo_(g_.size()), hi_(g_.size()) {
    for (std::size_t v = 0; v < g_.size(); ++v) by_id_.push_back(static_cast<int>(v));
    std::sort(by_id_.begin(), by_id_.end(),
              [&](int a, int b) { return dfg_.ops[a].id < dfg_.ops[b].id; });
    for (const auto& op : dfg_.ops) dg_.try_emplace(op.type, std::vector<double>(lambda_, 0.0));
  }

  Schedule run(const DgObserver& observer) {
    alap(dfg_, lat_, lambda_);  // reports infeasibility with the violating op
    for (std::size_t placed = 0; placed <= g_.size(); ++placed) {
      refresh();
      if (observer) observer(dg_);
      if (placed == g_.size()) break;
      place_best();
    }
    Schedule out{fixed_, lambda_, makespan_of(dfg_, fixed_, lat_)};
    return out;
  }

 private:
  int d(int v) const { return lat_[dfg_.ops[v].type]; }

  void refresh() {
    for (int v : g_.topo_order()) {
      int lo = 0;
      for (int p : g_.preds(v)) lo = std::max(lo, lo_[p] + d(p));
      lo_[v] = fixed_[v] >= 0 ? fixed_[v] : lo;
    }
    const auto& topo = g_.topo_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      int v = *it;
      int end = lambda_;
      for (int s : g_.succs(v)) end = std::min(end, hi_[s]);
      hi_[v] = fixed_[v] >= 0 ? fixed_[v] : end - d(v);
    }
    for (auto& [k, row] : dg_) std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t v = 0; v < g_.size(); ++v) {
      auto& row = dg_[dfg_.ops[v].type];
      const double p = 1.0 / (hi_[v] - lo_[v] + 1);
      for (int s = lo_[v]; s <= hi_[v]; ++s)
        for (int t = s; t < s + d(v); ++t) row[t] += p;
    }
    prefix_.clear();
    for (const auto& [k, row] : dg_) {
      auto& pre = prefix_[k];
      pre.assign(row.size() + 1, 0.0);
      for (std::size_t t = 0; t < row.size(); ++t) pre[t + 1] = pre[t] + row[t];
    }
  }

  // Sum of DG_k over [s, s + len).
  double window(OpType k, int s, int len) const {
    const auto& pre = prefix_.at(k);
    return pre[s + len] - pre[s];
  }

  // Expected DG overlap of op v when its frame is [lo, hi].
  double expected(int v, int lo, int hi) const {
    double sum = 0;
    for (int s = lo; s <= hi; ++s) sum += window(dfg_.ops[v].type, s, d(v));
    return sum / (hi - lo + 1);
  }

  double force(int v, int t) const {
    double f = window(dfg_.ops[v].type, t, d(v)) - expected(v, lo_[v], hi_[v]);
    for (int p : g_.preds(v)) {
      if (fixed_[p] >= 0) continue;
      int hi = std::min(hi_[p], t - d(p));
      if (hi != hi_[p]) f += expected(p, lo_[p], hi) - expected(p, lo_[p], hi_[p]);
    }
    for (int s : g_.succs(v)) {
      if (fixed_[s] >= 0) continue;
      int lo = std::max(lo_[s], t + d(v));
      if (lo != lo_[s]) f += expected(s, lo, hi_[s]) - expected(s, lo_[s], hi_[s]);
    }
    return f;
  }

  void place_best() {
    double best = std::numeric_limits<double>::infinity();
    int best_v = -1, best_t = -1;
    for (int v : by_id_) {
      if (fixed_[v] >= 0) continue;
      for (int t = lo_[v]; t <= hi_[v]; ++t) {
        double f = force(v, t);
        if (f < best - 1e-12) {
          best = f;
          best_v = v;
          best_t = t;
        }
      }
    }
    fixed_[best_v] = best_t;
  }

  const Dfg& dfg_;
  DependenceGraph g_;
  int lambda_;
  Latencies lat_;
  std::vector<int> fixed_, lo_, hi_, by_id_;
  DistributionGraphs dg_;
  std::map<OpType, std::vector<double>> prefix_;
};

class Oracle {
 public:
  Oracle(const Dfg& dfg, int lambda, const Latencies& latencies,
         const std::map<OpType, double>& weights, std::optional<std::uint64_t> seed)
      : dfg_(dfg), g_(dfg), lambda_(lambda), lat_(latencies), weights_(weights),
        starts_(g_.size(), -1) {
    if (seed) rng_.emplace(*seed);
    alap_ = alap(dfg, latencies, lambda);
    asap_ = asap(dfg, latencies);
    std::map<OpType, int> work;
    for (const auto& op : dfg.ops) {
      work[op.type] += latencies[op.type];
      occupancy_.try_emplace(op.type, std::vector<int>(lambda, 0));
      peak_.try_emplace(op.type, 0);
    }
    for (const auto& [k, w] : work) floor_[k] = (w + lambda - 1) / lambda;
  }

  OracleResult run() {
    search(0);
    OracleResult out;
    out.schedule = {best_starts_, lambda_, makespan_of(dfg_, best_starts_, lat_)};
    out.usage = resource_usage(dfg_, out.schedule, lat_);
    out.cost = resource_cost(out.usage, weights_);
    return out;
  }

 private:
  double weight(OpType k) const {
    auto it = weights_.find(k);
    return it == weights_.end() ? 1.0 : it->second;
  }

  double bound() const {
    double cost = 0;
    for (const auto& [k, r] : peak_) cost += weight(k) * std::max(r, floor_.at(k));
    return cost;
  }

  void search(std::size_t depth) {
    if (bound() >= best_cost_) return;
    if (depth == g_.size()) {
      best_cost_ = bound();
      best_starts_ = starts_;
      return;
    }
    const int v = g_.topo_order()[depth];
    const OpType k = dfg_.ops[v].type;
    const int len = lat_[k];
    int lo = asap_[v];
    for (int p : g_.preds(v)) lo = std::max(lo, starts_[p] + lat_[dfg_.ops[p].type]);
    std::vector<int> steps;
    for (int t = lo; t <= alap_[v]; ++t) steps.push_back(t);
    if (rng_) std::shuffle(steps.begin(), steps.end(), *rng_);
    auto& occ = occupancy_[k];
    for (int t : steps) {
      const int saved = peak_[k];
      for (int tau = t; tau < t + len; ++tau) peak_[k] = std::max(peak_[k], ++occ[tau]);
      starts_[v] = t;
      search(depth + 1);
      for (int tau = t; tau < t + len; ++tau) --occ[tau];
      peak_[k] = saved;
    }
    starts_[v] = -1;
  }

  const Dfg& dfg_;
  DependenceGraph g_;
  int lambda_;
  Latencies lat_;
  std::map<OpType, double> weights_;
  std::vector<int> asap_, alap_, starts_, best_starts_;
  std::map<OpType, std::vector<int>> occupancy_;
  std::map<OpType, int> peak_, floor_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  std::optional<std::mt19937_64> rng_;
};

}  // namespace

Schedule fds_schedule(const Dfg& dfg, int lambda, const Latencies& latencies,
                      const DgObserver& observer) {
  if (lambda < 0) fail_infeasible("latency constraint must be non-negative");
  return ForceDirected(dfg, lambda, latencies).run(observer);
}

Schedule list_schedule(const Dfg& dfg, const std::map<OpType, int>& resources,
                       const Latencies& latencies) {
  Schedule out;
  out.starts = list_schedule_starts(dfg, resources, latencies);
  out.makespan = makespan_of(dfg, out.starts, latencies);
  out.lambda = out.makespan;
  return out;
}

OracleResult brute_force_min_resources(const Dfg& dfg, int lambda, const Latencies& latencies,
                                       const std::map<OpType, double>& weights,
                                       std::optional<std::uint64_t> shuffle_seed) {
  if (dfg.ops.size() > kOracleMaxOps)
    fail("exhaustive resource oracle limited to " + std::to_string(kOracleMaxOps) +
         " operations, graph has " + std::to_string(dfg.ops.size()));
  return Oracle(dfg, lambda, latencies, weights, shuffle_seed).run();
}

std::vector<int> latency_points(const Dfg& dfg, const Latencies& latencies, int points) {
  if (points < 2) fail("latency exploration needs at least 2 points");
  const int lo = min_latency(dfg, latencies);
  const int hi = max_useful_latency(dfg, latencies);
  std::vector<int> out;
  const long den = points - 1;
  for (long i = 0; i < points; ++i) {
    const long num = i * (hi - lo);
    const int lambda = lo + static_cast<int>((2 * num + den) / (2 * den));
    if (out.empty() || out.back() != lambda) out.push_back(lambda);
  }
  return out;
}

std::vector<LatencyPoint> explore_latencies(const Dfg& dfg, const Latencies& latencies,
                                            int points) {
  std::vector<LatencyPoint> out;
  for (int lambda : latency_points(dfg, latencies, points)) {
    LatencyPoint point{lambda, fds_schedule(dfg, lambda, latencies), {}};
    point.usage = resource_usage(dfg, point.schedule, latencies);
    out.push_back(std::move(point));
  }
  return out;
}

std::string write_schedule(const Dfg& dfg, const Schedule& schedule, const ResourceUsage& usage) {
  std::string out = "lambda " + std::to_string(schedule.lambda) + "\nmakespan " +
                    std::to_string(schedule.makespan) + "\n";
  for (std::size_t v = 0; v < dfg.ops.size(); ++v)
    out += "op " + std::to_string(dfg.ops[v].id) + " @ " + std::to_string(schedule.starts[v]) + "\n";
  out += "resources {\n";
  for (const auto& [k, r] : usage) out += std::string("  ") + to_string(k) + " " + std::to_string(r) + "\n";
  out += "}\n";
  return out;
}

}  // namespace hhls
