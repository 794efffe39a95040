#include "hhls/dfg.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "hhls/error.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

const char* to_string(OpType type) {
  switch (type) {
    case OpType::Add: return "add";
    case OpType::Sub: return "sub";
    case OpType::Mul: return "mul";
    case OpType::Div: return "div";
    case OpType::Cmp: return "cmp";
    case OpType::Shift: return "shift";
    case OpType::Logic: return "logic";
    case OpType::Load: return "load";
    case OpType::Store: return "store";
    case OpType::Select: return "select";
  }
  return "?";
}

std::optional<OpType> parse_op_type(std::string_view text) {
  for (OpType t : kAllOpTypes)
    if (text == to_string(t)) return t;
  return std::nullopt;
}

Latencies Latencies::unit() {
  Latencies l;
  l.cycles.fill(1);
  return l;
}

DependenceGraph::DependenceGraph(const Dfg& dfg) {
  const std::size_t n = dfg.id_count();
  std::vector<int> seen(n, 0);
  auto claim = [&](int id, const char* what) {
    if (id < 0 || static_cast<std::size_t>(id) >= n)
      fail(std::string("dataflow graph ") + what + " id " + std::to_string(id) +
           " outside dense range [0, " + std::to_string(n) + ")");
    if (seen[id]++) fail("dataflow graph id " + std::to_string(id) + " declared twice");
  };
  for (int id : dfg.inputs) claim(id, "input");
  for (std::size_t i = 0; i < dfg.ops.size(); ++i) {
    claim(dfg.ops[i].id, "operation");
    index_[dfg.ops[i].id] = static_cast<int>(i);
  }
  std::vector<bool> is_input(n, false);
  for (int id : dfg.inputs) is_input[id] = true;

  const std::size_t m = dfg.ops.size();
  preds_.assign(m, {});
  succs_.assign(m, {});
  for (std::size_t i = 0; i < m; ++i) {
    for (int operand : dfg.ops[i].operands) {
      if (operand < 0 || static_cast<std::size_t>(operand) >= n)
        fail("operation " + std::to_string(dfg.ops[i].id) + " reads undeclared id " +
             std::to_string(operand));
      if (is_input[operand]) continue;
      int p = index_.at(operand);
      if (std::find(preds_[i].begin(), preds_[i].end(), p) == preds_[i].end()) {
        preds_[i].push_back(p);
        succs_[p].push_back(static_cast<int>(i));
      }
    }
  }
  for (int out : dfg.outputs)
    if (out < 0 || static_cast<std::size_t>(out) >= n)
      fail("output names undeclared id " + std::to_string(out));
  for (const auto& c : dfg.carried)
    if (!index_.count(c.producer) || !index_.count(c.consumer))
      fail("carried dependence " + std::to_string(c.producer) + " -> " + std::to_string(c.consumer) +
           " must connect operations");

  std::vector<int> indeg(m);
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t i = 0; i < m; ++i) {
    indeg[i] = static_cast<int>(preds_[i].size());
    if (indeg[i] == 0) ready.push(static_cast<int>(i));
  }
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (int s : succs_[v])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (topo_.size() != m) {
    for (std::size_t i = 0; i < m; ++i)
      if (indeg[i] > 0)
        fail("cycle detected in dataflow graph through operation " + std::to_string(dfg.ops[i].id));
  }
}

int DependenceGraph::index_of(int id) const {
  auto it = index_.find(id);
  return it == index_.end() ? -1 : it->second;
}

void validate_dfg(const Dfg& dfg) { DependenceGraph check(dfg); }

std::vector<int> asap(const Dfg& dfg, const Latencies& latencies) {
  DependenceGraph g(dfg);
  std::vector<int> out(g.size(), 0);
  for (int v : g.topo_order())
    for (int p : g.preds(v)) out[v] = std::max(out[v], out[p] + latencies[dfg.ops[p].type]);
  return out;
}

std::vector<int> alap(const Dfg& dfg, const Latencies& latencies, int lambda) {
  DependenceGraph g(dfg);
  const auto early = asap(dfg, latencies);
  std::vector<int> out(g.size(), 0);
  const auto& topo = g.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int v = *it;
    int latest = lambda;
    for (int s : g.succs(v)) latest = std::min(latest, out[s]);
    out[v] = latest - latencies[dfg.ops[v].type];
  }
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (early[v] > out[v])
      fail_infeasible("latency constraint " + std::to_string(lambda) +
                      " is infeasible: operation " + std::to_string(dfg.ops[v].id) + " (" +
                      to_string(dfg.ops[v].type) + ") cannot start before step " +
                      std::to_string(early[v]) + " but must start by step " +
                      std::to_string(out[v]));
  }
  return out;
}

TimeBounds time_bounds(const Dfg& dfg, const Latencies& latencies, int lambda) {
  return {asap(dfg, latencies), alap(dfg, latencies, lambda)};
}

int min_latency(const Dfg& dfg, const Latencies& latencies) {
  const auto early = asap(dfg, latencies);
  int out = 0;
  for (std::size_t v = 0; v < early.size(); ++v)
    out = std::max(out, early[v] + latencies[dfg.ops[v].type]);
  return out;
}

std::vector<int> path_to_sink(const Dfg& dfg, const Latencies& latencies) {
  DependenceGraph g(dfg);
  std::vector<int> out(g.size(), 0);
  const auto& topo = g.topo_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    int v = *it;
    int tail = 0;
    for (int s : g.succs(v)) tail = std::max(tail, out[s]);
    out[v] = tail + latencies[dfg.ops[v].type];
  }
  return out;
}

std::vector<int> list_schedule_starts(const Dfg& dfg, const std::map<OpType, int>& resources,
                                      const Latencies& latencies) {
  DependenceGraph g(dfg);
  const std::size_t m = g.size();
  for (const auto& op : dfg.ops) {
    auto it = resources.find(op.type);
    if (it == resources.end() || it->second < 1)
      fail(std::string("list scheduling needs at least one '") + to_string(op.type) + "' unit");
  }
  const auto priority = path_to_sink(dfg, latencies);
  std::vector<int> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return priority[a] > priority[b]; });

  std::vector<int> start(m, -1);
  std::size_t placed = 0;
  for (int t = 0; placed < m; ++t) {
    std::map<OpType, int> busy;
    for (std::size_t v = 0; v < m; ++v)
      if (start[v] >= 0 && start[v] <= t && t < start[v] + latencies[dfg.ops[v].type])
        ++busy[dfg.ops[v].type];
    for (int v : order) {
      if (start[v] >= 0) continue;
      bool ready = true;
      for (int p : g.preds(v))
        if (start[p] < 0 || start[p] + latencies[dfg.ops[p].type] > t) ready = false;
      if (!ready) continue;
      OpType k = dfg.ops[v].type;
      if (busy[k] < resources.at(k)) {
        start[v] = t;
        ++busy[k];
        ++placed;
      }
    }
  }
  return start;
}

int max_useful_latency(const Dfg& dfg, const Latencies& latencies) {
  std::map<OpType, int> one;
  for (OpType t : kAllOpTypes) one[t] = 1;
  const auto start = list_schedule_starts(dfg, one, latencies);
  int out = 0;
  for (std::size_t v = 0; v < start.size(); ++v)
    out = std::max(out, start[v] + latencies[dfg.ops[v].type]);
  return out;
}

Dfg unroll_body(const Dfg& body, int factor) {
  if (factor < 1) fail("unroll factor must be positive");
  if (factor == 1) return body;
  validate_dfg(body);
  const int n = static_cast<int>(body.id_count());
  Dfg out;
  for (int k = 0; k < factor; ++k) {
    const int base = k * n;
    for (int id : body.inputs) out.inputs.push_back(base + id);
    for (const auto& op : body.ops) {
      Operation copy{base + op.id, op.type, {}};
      for (int operand : op.operands) copy.operands.push_back(base + operand);
      if (k > 0)
        for (const auto& c : body.carried)
          if (c.consumer == op.id) copy.operands.push_back(base - n + c.producer);
      out.ops.push_back(std::move(copy));
    }
    for (int id : body.outputs) out.outputs.push_back(base + id);
  }
  for (const auto& c : body.carried)
    out.carried.push_back({(factor - 1) * n + c.producer, c.consumer});
  return out;
}

namespace {

void unroll_loops(std::vector<Loop>& loops, int factor) {
  for (auto& loop : loops) {
    if (!loop.children.empty()) {
      unroll_loops(loop.children, factor);
      continue;
    }
    if (!loop.unrollable)
      fail("loop with trip count " + std::to_string(loop.trip) +
           " cannot be unrolled (data-dependent exit)");
    if (loop.trip % static_cast<std::uint64_t>(factor) != 0)
      fail("unroll factor " + std::to_string(factor) + " does not divide trip count " +
           std::to_string(loop.trip));
    loop.body = unroll_body(loop.body, factor);
    loop.trip /= static_cast<std::uint64_t>(factor);
  }
}

std::uint64_t loop_iterations(const std::vector<Loop>& loops) {
  std::uint64_t total = 0;
  for (const auto& l : loops) total += l.trip + loop_iterations(l.children);
  return total;
}

std::size_t count_loops(const std::vector<Loop>& loops) {
  std::size_t total = 0;
  for (const auto& l : loops) total += 1 + count_loops(l.children);
  return total;
}

std::uint64_t loop_dynamic(const std::vector<Loop>& loops) {
  std::uint64_t total = 0;
  for (const auto& l : loops) total += l.trip * (l.body.size() + loop_dynamic(l.children));
  return total;
}

}  // namespace

LoopNest unroll(const LoopNest& nest, int factor) {
  if (factor < 1) fail("unroll factor must be positive");
  LoopNest out = nest;
  if (factor == 1) return out;
  unroll_loops(out.loops, factor);
  return out;
}

std::uint64_t total_iterations(const LoopNest& nest) { return loop_iterations(nest.loops); }
std::size_t loop_count(const LoopNest& nest) { return count_loops(nest.loops); }

std::uint64_t dynamic_operations(const LoopNest& nest) {
  return nest.pre.size() + nest.post.size() + loop_dynamic(nest.loops);
}

namespace {

struct DfgParser {
  int lineno = 0;

  [[noreturn]] void bad(const std::string& why) const {
    fail("dfg line " + std::to_string(lineno) + ": " + why);
  }

  int number(const std::string& tok) const {
    std::uint64_t v = 0;
    if (!parse_u64(tok, v) || v > 1000000000) bad("expected a non-negative integer, got '" + tok + "'");
    return static_cast<int>(v);
  }

  // Applies one statement to a segment; returns false if the keyword is not a
  // segment statement.
  bool statement(const std::vector<std::string>& t, Dfg& seg) const {
    const std::string& kw = t[0];
    if (kw == "in" || kw == "out") {
      if (t.size() != 2) bad("expected '" + kw + " <id>'");
      (kw == "in" ? seg.inputs : seg.outputs).push_back(number(t[1]));
    } else if (kw == "op") {
      if (t.size() < 3) bad("expected 'op <id> <type> [operands]'");
      auto type = parse_op_type(t[2]);
      if (!type) bad("unknown operation type '" + t[2] + "'");
      Operation op{number(t[1]), *type, {}};
      for (std::size_t i = 3; i < t.size(); ++i) op.operands.push_back(number(t[i]));
      seg.ops.push_back(std::move(op));
    } else if (kw == "carry") {
      if (t.size() != 3) bad("expected 'carry <producer> <consumer>'");
      seg.carried.push_back({number(t[1]), number(t[2])});
    } else {
      return false;
    }
    return true;
  }
};

std::vector<std::string> tokens(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

void write_segment(std::string& out, const Dfg& seg, const std::string& indent) {
  for (int id : seg.inputs) out += indent + "in " + std::to_string(id) + "\n";
  for (const auto& op : seg.ops) {
    out += indent + "op " + std::to_string(op.id) + " " + to_string(op.type);
    for (int o : op.operands) out += " " + std::to_string(o);
    out += "\n";
  }
  for (const auto& c : seg.carried)
    out += indent + "carry " + std::to_string(c.producer) + " " + std::to_string(c.consumer) + "\n";
  for (int id : seg.outputs) out += indent + "out " + std::to_string(id) + "\n";
}

void write_loops(std::string& out, const std::vector<Loop>& loops, const std::string& indent) {
  for (const auto& l : loops) {
    out += indent + "loop " + std::to_string(l.trip) + (l.unrollable ? "" : " nounroll") + " {\n";
    write_segment(out, l.body, indent + "  ");
    write_loops(out, l.children, indent + "  ");
    out += indent + "}\n";
  }
}

void validate_loops(const std::vector<Loop>& loops) {
  for (const auto& l : loops) {
    if (l.trip < 1) fail("loop trip count must be at least 1");
    validate_dfg(l.body);
    validate_loops(l.children);
  }
}

}  // namespace

LoopNest parse_dfg(std::string_view text) {
  LoopNest nest;
  DfgParser p;
  std::vector<Loop*> stack;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++p.lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto t = tokens(line);
    if (t.empty()) continue;
    if (t[0] == "loop") {
      if (t.size() < 3 || t.back() != "{") p.bad("expected 'loop <trip> [nounroll] {'");
      Loop loop;
      std::uint64_t trip = 0;
      if (!parse_u64(t[1], trip) || trip < 1) p.bad("loop trip count must be a positive integer");
      loop.trip = trip;
      if (t.size() == 4) {
        if (t[2] != "nounroll") p.bad("unknown loop flag '" + t[2] + "'");
        loop.unrollable = false;
      } else if (t.size() != 3) {
        p.bad("expected 'loop <trip> [nounroll] {'");
      }
      auto& siblings = stack.empty() ? nest.loops : stack.back()->children;
      siblings.push_back(std::move(loop));
      stack.push_back(&siblings.back());
      continue;
    }
    if (t[0] == "}") {
      if (t.size() != 1 || stack.empty()) p.bad("unbalanced '}'");
      stack.pop_back();
      continue;
    }
    Dfg& seg = !stack.empty() ? stack.back()->body : (nest.loops.empty() ? nest.pre : nest.post);
    if (!p.statement(t, seg)) p.bad("unknown statement '" + t[0] + "'");
  }
  if (!stack.empty()) fail("dfg: unterminated loop block at end of input");
  validate_dfg(nest.pre);
  validate_dfg(nest.post);
  validate_loops(nest.loops);
  return nest;
}

Dfg parse_dfg_segment(std::string_view text) {
  LoopNest nest = parse_dfg(text);
  if (!nest.loops.empty()) fail("expected a straight-line dataflow graph without loops");
  return nest.pre;
}

std::string write_dfg(const LoopNest& nest) {
  std::string out;
  write_segment(out, nest.pre, "");
  write_loops(out, nest.loops, "");
  write_segment(out, nest.post, "");
  return out;
}

}  // namespace hhls
