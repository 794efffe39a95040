#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hhls {

enum class OpType { Add, Sub, Mul, Div, Cmp, Shift, Logic, Load, Store, Select };

inline constexpr std::size_t kOpTypeCount = 10;
inline constexpr std::array<OpType, kOpTypeCount> kAllOpTypes = {
    OpType::Add,  OpType::Sub,   OpType::Mul,  OpType::Div,   OpType::Cmp,
    OpType::Shift, OpType::Logic, OpType::Load, OpType::Store, OpType::Select};

const char* to_string(OpType type);
std::optional<OpType> parse_op_type(std::string_view text);

// Cycles (control steps) per operation type. Defaults: 1, except div = 4 and
// load/store = 2.
struct Latencies {
  std::array<int, kOpTypeCount> cycles{1, 1, 1, 4, 1, 1, 1, 2, 2, 1};

  int operator[](OpType type) const { return cycles[static_cast<std::size_t>(type)]; }
  int& operator[](OpType type) { return cycles[static_cast<std::size_t>(type)]; }
  static Latencies unit();
  friend bool operator==(const Latencies&, const Latencies&) = default;
};

struct Operation {
  int id = 0;
  OpType type = OpType::Add;
  std::vector<int> operands;  // ids of inputs or operations
  friend bool operator==(const Operation&, const Operation&) = default;
};

// Loop-carried dependence with distance 1: `consumer` in iteration i+1 reads
// `producer` of iteration i.
struct CarriedEdge {
  int producer = 0;
  int consumer = 0;
  friend bool operator==(const CarriedEdge&, const CarriedEdge&) = default;
};

// Dataflow graph of one straight-line segment. Inputs and operations share a
// dense id space [0, inputs + ops).
struct Dfg {
  std::vector<int> inputs;
  std::vector<Operation> ops;
  std::vector<int> outputs;
  std::vector<CarriedEdge> carried;

  std::size_t size() const { return ops.size(); }
  bool empty() const { return ops.empty(); }
  std::size_t id_count() const { return inputs.size() + ops.size(); }
  friend bool operator==(const Dfg&, const Dfg&) = default;
};

// Operation-index view of a Dfg: predecessors/successors among operations
// (inputs dropped), plus a topological order. Construction validates the graph
// (dense unique ids, resolvable operands, acyclic) and throws on violation.
class DependenceGraph {
 public:
  explicit DependenceGraph(const Dfg& dfg);

  std::size_t size() const { return preds_.size(); }
  const std::vector<int>& preds(std::size_t op) const { return preds_[op]; }
  const std::vector<int>& succs(std::size_t op) const { return succs_[op]; }
  const std::vector<int>& topo_order() const { return topo_; }
  int index_of(int id) const;  // op index of a Dfg id, -1 for inputs

 private:
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
  std::vector<int> topo_;
  std::map<int, int> index_;
};

void validate_dfg(const Dfg& dfg);

// Per operation index: earliest / latest start control step.
struct TimeBounds {
  std::vector<int> asap;
  std::vector<int> alap;
};

std::vector<int> asap(const Dfg& dfg, const Latencies& latencies);

// Latest start steps such that every operation finishes by `lambda`. Throws
// an Infeasible error naming the first violating operation when lambda is
// below the critical path.
std::vector<int> alap(const Dfg& dfg, const Latencies& latencies, int lambda);

TimeBounds time_bounds(const Dfg& dfg, const Latencies& latencies, int lambda);

// Critical-path length in control steps (0 for an empty graph).
int min_latency(const Dfg& dfg, const Latencies& latencies);

// Makespan of the serial schedule with one unit per operation type.
int max_useful_latency(const Dfg& dfg, const Latencies& latencies);

// Longest path (including own latency) from each operation to a sink.
std::vector<int> path_to_sink(const Dfg& dfg, const Latencies& latencies);

// Resource-constrained list scheduling: priority = longest path to a sink,
// ties by lower operation index. Units are not pipelined: an operation holds
// its unit for its full latency. Returns start steps per operation index.
std::vector<int> list_schedule_starts(const Dfg& dfg, const std::map<OpType, int>& resources,
                                      const Latencies& latencies);

// ---------------------------------------------------------------------------
// Loop structure

struct Loop {
  std::uint64_t trip = 1;
  bool unrollable = true;  // false for loops with data-dependent exits
  Dfg body;
  std::vector<Loop> children;
  friend bool operator==(const Loop&, const Loop&) = default;
};

struct LoopNest {
  Dfg pre;
  std::vector<Loop> loops;
  Dfg post;
  friend bool operator==(const LoopNest&, const LoopNest&) = default;
};

// Replicates a loop body `factor` times, chaining carried dependences between
// consecutive copies.
Dfg unroll_body(const Dfg& body, int factor);

// Unrolls every innermost loop by `factor`. Errors if the factor does not
// divide a trip count or a target loop is not unrollable. Factor 1 is the
// identity.
LoopNest unroll(const LoopNest& nest, int factor);

// Sum of trip counts over all loops.
std::uint64_t total_iterations(const LoopNest& nest);
std::size_t loop_count(const LoopNest& nest);

// Operations executed by one run of the nest (trip x body, recursively).
std::uint64_t dynamic_operations(const LoopNest& nest);

// `.dfg` text format:
//   in <id> | op <id> <type> [operand ids] | out <id> | carry <p> <c>
//   loop <trip> [nounroll] { ... }
// Statements before the first loop form the pre segment, after it the post.
LoopNest parse_dfg(std::string_view text);
std::string write_dfg(const LoopNest& nest);

// Convenience for straight-line graphs.
Dfg parse_dfg_segment(std::string_view text);

}  // namespace hhls
