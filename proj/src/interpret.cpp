#include <algorithm>
#include <deque>
#include <sstream>

#include "hhls/error.hpp"
#include "hhls/fsm.hpp"

namespace hhls {

namespace {

Rational cycle_time(std::uint64_t cycle, std::uint64_t hz) {
  return Rational(static_cast<std::int64_t>(cycle), static_cast<std::int64_t>(hz));
}

Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

struct Request {
  std::string event;
  std::optional<std::int32_t> payload;
  std::uint64_t arrival = 0;
  Rational slack;
  std::uint64_t lag = 1;  // receiver lag once accepted: one cycle, plus sync
};

struct Runtime {
  const FsmInstance* inst = nullptr;
  int state = 0;
  bool first = true;
  std::uint64_t cycle = 0;  // next cycle not yet interpreted
  std::map<std::string, std::int32_t> values;
  std::optional<std::uint64_t> timer_start;
  std::uint64_t timer_cycles = 0;  // compensated length of the running timer
  std::uint64_t lag = 0;
  std::optional<std::uint64_t> done_cycle;
  std::vector<std::int32_t> results;
  std::deque<Request> requests;  // ordered by arrival
  Rational slack;

  const FsmIr& fsm() const { return inst->fsm; }
  std::uint64_t hz() const { return inst->clock_hz; }
  Rational period() const { return Rational(1, static_cast<std::int64_t>(hz())); }
};

class Interpreter {
 public:
  Interpreter(const SystemIr& ir, const InterpretOptions& options) : ir_(ir), options_(options) {
    for (const auto& inst : ir.instances) {
      Runtime rt;
      rt.inst = &inst;
      rt.state = inst.fsm.initial;
      for (const auto& v : inst.fsm.source.variables) rt.values[v.name] = wrap_to_width(v.initial, v.width);
      for (const auto& e : inst.fsm.source.events)
        if (e.direction == Direction::Input && e.is_data()) rt.values[e.name] = 0;
      runtimes_.push_back(std::move(rt));
      trace_.instances.push_back(inst.name);
      trace_.clock_hz.push_back(inst.clock_hz);
    }
  }

  CycleTrace run(std::vector<Stimulus> stimulus, const Rational& horizon) {
    horizon_ = horizon;
    std::stable_sort(stimulus.begin(), stimulus.end(),
                     [](const Stimulus& a, const Stimulus& b) { return a.time < b.time; });
    for (const auto& s : stimulus) {
      const std::string where = s.target.instance + "." + s.target.event;
      int idx = ir_.instance_index(s.target.instance);
      if (idx < 0) fail("unconnected stimulus target '" + where + "': no such instance");
      const EventDecl* e = runtimes_[idx].fsm().source.find_event(s.target.event);
      if (!e || e->direction != Direction::Input)
        fail("unconnected stimulus target '" + where + "': no such input event");
      if (e->is_data() != s.payload.has_value()) fail("payload type mismatch for '" + where + "'");
      if (s.time < Rational(0)) fail("negative stimulus time for '" + where + "'");
      auto& rt = runtimes_[idx];
      const std::uint64_t arrival = static_cast<std::uint64_t>((s.time * Rational(static_cast<std::int64_t>(rt.hz()))).ceil());
      push_request(rt, {s.target.event, s.payload, arrival, cycle_time(arrival, rt.hz()) - s.time});
    }

    if (Rational(0) >= horizon) return finish();
    for (std::size_t i = 0; i < runtimes_.size(); ++i)
      record(i, 0, CycleEvent::Kind::Enter, runtimes_[i].fsm().states[runtimes_[i].state].name);

    while (true) {
      std::optional<Rational> now;
      for (std::size_t i = 0; i < runtimes_.size(); ++i) {
        auto c = next_active(runtimes_[i]);
        if (!c) continue;
        Rational t = cycle_time(*c, runtimes_[i].hz());
        if (!now || t < *now) now = t;
      }
      if (!now || *now >= horizon) break;
      now_ = *now;

      std::vector<bool> active(runtimes_.size(), false);
      auto activate = [&] {
        for (std::size_t i = 0; i < runtimes_.size(); ++i) {
          if (active[i]) continue;
          auto c = next_active(runtimes_[i]);
          if (c && cycle_time(*c, runtimes_[i].hz()) == now_) {
            active[i] = true;
            runtimes_[i].cycle = *c;
            if (++steps_ > options_.step_limit)
              fail("interpretation exceeded " + std::to_string(options_.step_limit) + " steps");
          }
        }
      };
      activate();
      for (std::size_t i = 0; i < runtimes_.size(); ++i)
        if (active[i]) execute(i);
      activate();  // same-time deliveries
      for (std::size_t i = 0; i < runtimes_.size(); ++i)
        if (active[i]) decide(i);
    }
    return finish();
  }

 private:
  CycleTrace finish() {
    std::stable_sort(trace_.events.begin(), trace_.events.end(),
                     [](const CycleEvent& a, const CycleEvent& b) { return a.time < b.time; });
    for (const auto& rt : runtimes_) trace_.cycles.push_back(rt.cycle);
    return std::move(trace_);
  }

  static void push_request(Runtime& rt, Request r) {
    auto pos = std::upper_bound(rt.requests.begin(), rt.requests.end(), r.arrival,
                                [](std::uint64_t a, const Request& q) { return a < q.arrival; });
    rt.requests.insert(pos, std::move(r));
  }

  std::optional<std::uint64_t> next_active(const Runtime& rt) const {
    const FsmState& st = rt.fsm().states[rt.state];
    if (st.kind == SubStateKind::Wait) return rt.done_cycle;
    if (rt.first) return rt.cycle;
    std::optional<std::uint64_t> best;
    if (!rt.requests.empty()) best = std::max(rt.requests.front().arrival, rt.cycle);
    if (rt.timer_start) {
      const std::uint64_t done = *rt.timer_start + rt.timer_cycles - 1;
      if (done >= rt.cycle && (!best || done < *best)) best = done;
    }
    return best;
  }

  void record(std::size_t i, std::uint64_t cycle, CycleEvent::Kind kind, const std::string& name,
              std::optional<std::int32_t> value = std::nullopt) {
    const Rational t = cycle_time(cycle, runtimes_[i].hz());
    if (t >= horizon_) return;
    trace_.events.push_back(
        {cycle, t, static_cast<int>(i), kind, name, value, runtimes_[i].slack, runtimes_[i].lag});
  }

  std::int32_t lookup(const Runtime& rt, const std::string& name) const {
    auto it = rt.values.find(name);
    if (it != rt.values.end()) return it->second;
    for (const auto& c : rt.fsm().source.constants)
      if (c.name == name) return wrap32(c.value);
    fail("undeclared name '" + name + "' in instance '" + rt.inst->name + "'");
  }

  std::int32_t eval(const Runtime& rt, const Expr& e) const {
    return evaluate(e, [&](const std::string& n) { return lookup(rt, n); });
  }

  void assign(std::size_t i, const std::string& variable, std::int64_t value) {
    auto& rt = runtimes_[i];
    int width = kDefaultWidth;
    for (const auto& v : rt.fsm().source.variables)
      if (v.name == variable) width = v.width;
    rt.values[variable] = wrap_to_width(value, width);
    record(i, rt.cycle, CycleEvent::Kind::Assign, variable, rt.values[variable]);
  }

  void emit(std::size_t i, const std::string& event, std::optional<std::int32_t> payload) {
    const auto& rt = runtimes_[i];
    record(i, rt.cycle, CycleEvent::Kind::Output, event, payload);
    for (const auto& link : ir_.links) {
      if (link.source != static_cast<int>(i) || link.source_event != event) continue;
      auto& dst = runtimes_[link.destination];
      const Rational scaled = now_ * Rational(static_cast<std::int64_t>(dst.hz()));
      std::uint64_t arrival = static_cast<std::uint64_t>(scaled.ceil());
      if (link.crossing) arrival += kSyncCycles;
      push_request(dst, {link.destination_event, payload, arrival,
                         rt.slack + (cycle_time(arrival, dst.hz()) - now_),
                         1 + (link.crossing ? kSyncCycles : 0)});
    }
  }

  // First cycle of an Entry or Resume sub-state: run its action segment.
  void execute(std::size_t i) {
    auto& rt = runtimes_[i];
    const FsmState& st = rt.fsm().states[rt.state];
    if (!rt.first || st.kind == SubStateKind::Wait) return;
    for (const Action& action : st.actions) {
      if (const auto* n = std::get_if<NotifyAction>(&action.kind)) {
        emit(i, n->event, std::nullopt);
      } else if (const auto* x = std::get_if<ExportAction>(&action.kind)) {
        const EventDecl* e = rt.fsm().source.find_event(x->event);
        emit(i, x->event, wrap_to_width(eval(rt, x->value), e ? e->payload_width.value_or(32) : 32));
      } else if (const auto* a = std::get_if<AssignAction>(&action.kind)) {
        assign(i, a->variable, eval(rt, a->value));
      }
    }
    if (st.invoke) {
      std::vector<std::int32_t> args;
      for (const auto& arg : st.invoke->arguments) args.push_back(lookup(rt, arg));
      rt.results = options_.mcc_behavior(st.invoke->mcc, args, st.invoke->results.size());
      rt.results.resize(st.invoke->results.size(), 0);
      auto it = options_.mcc_cycles.find(st.invoke->mcc);
      const std::uint64_t latency = it == options_.mcc_cycles.end() ? 0 : it->second;
      rt.done_cycle = rt.cycle + latency + 1;
      record(i, rt.cycle, CycleEvent::Kind::MccStart, st.invoke->mcc);
    }
  }

  void decide(std::size_t i) {
    auto& rt = runtimes_[i];
    const FsmIr& fsm = rt.fsm();
    const FsmState& st = fsm.states[rt.state];
    const std::uint64_t c = rt.cycle;
    if (rt.first && st.settles && st.timer) {
      rt.timer_start = c;
      rt.timer_cycles = compensated_cycles(fsm.timers[*st.timer].cycles, rt.lag);
    }

    std::optional<int> next;
    Rational slack = rt.slack;
    std::uint64_t lag = std::min(rt.lag + 1, kLagMax);  // zero-time steps cost a cycle
    // Pending requests first, in arrival order: unmatched ones are
    // acknowledged and dropped, the first matching import fires.
    while (st.settles && !rt.requests.empty() && rt.requests.front().arrival <= c) {
      Request r = std::move(rt.requests.front());
      rt.requests.pop_front();
      const FsmRow* hit = nullptr;
      for (const FsmRow& row : fsm.rows[rt.state])
        if (row.condition == Condition::Request && row.event == r.event) {
          hit = &row;
          break;
        }
      if (!hit) {
        record(i, c, CycleEvent::Kind::Dropped, r.event, r.payload);
        continue;
      }
      record(i, c, CycleEvent::Kind::Input, r.event, r.payload);
      if (r.payload) rt.values[r.event] = *r.payload;
      next = hit->next;
      slack = std::max(rt.slack, r.slack) + rt.period();
      lag = r.lag;
      break;
    }
    for (const FsmRow& row : fsm.rows[rt.state]) {
      if (next) break;
      switch (row.condition) {
        case Condition::Always:
          next = row.next;
          slack = rt.slack + rt.period();
          break;
        case Condition::MccDone:
          if (rt.done_cycle && *rt.done_cycle == c) {
            const InvokeAction& inv = *fsm.states[rt.state - 1].invoke;
            record(i, c, CycleEvent::Kind::MccDone, inv.mcc);
            for (std::size_t k = 0; k < inv.results.size(); ++k) assign(i, inv.results[k], rt.results[k]);
            rt.done_cycle.reset();
            next = row.next;
            slack = rt.slack + rt.period();
          }
          break;
        case Condition::Request:  // handled above
          break;
        case Condition::Guard:
          if (rt.first && eval(rt, row.guard) != 0) {
            next = row.next;
            slack = rt.slack + rt.period();
          }
          break;
        case Condition::Delta:
          if (rt.first) {
            next = row.next;
            slack = rt.slack + rt.period();
          }
          break;
        case Condition::TimerDone:
          if (rt.timer_start) {
            const TimerGeneric& t = fsm.timers[*st.timer];
            if (*rt.timer_start + rt.timer_cycles - 1 == c) {
              // The shortened count absorbs the entry lag; what it could not
              // absorb carries over.
              const std::uint64_t absorbed = t.cycles - rt.timer_cycles;
              next = row.next;
              lag = rt.lag - absorbed;
              slack = rt.slack - rt.period() * Rational(static_cast<std::int64_t>(absorbed)) + abs(t.error);
            }
          }
          break;
        case Condition::Hold:
          break;
      }
    }
    rt.cycle = c + 1;
    if (!next) {
      rt.first = false;
      return;
    }
    rt.state = *next;
    rt.first = true;
    rt.slack = slack;
    rt.lag = lag;
    rt.timer_start.reset();
    const FsmState& target = fsm.states[rt.state];
    record(i, rt.cycle, target.kind == SubStateKind::Entry ? CycleEvent::Kind::Enter : CycleEvent::Kind::SubState,
           target.name);
  }

  const SystemIr& ir_;
  const InterpretOptions& options_;
  std::vector<Runtime> runtimes_;
  CycleTrace trace_;
  Rational now_;
  Rational horizon_;
  std::uint64_t steps_ = 0;
};

}  // namespace

CycleTrace interpret(const SystemIr& ir, const std::vector<Stimulus>& stimulus, const Rational& horizon,
                     const InterpretOptions& options) {
  Interpreter interpreter(ir, options);
  return interpreter.run(stimulus, horizon);
}

EventTrace CycleTrace::to_event_trace() const {
  EventTrace out;
  for (const auto& e : events) {
    TraceRecord::Kind kind;
    switch (e.kind) {
      case CycleEvent::Kind::Enter: kind = TraceRecord::Kind::Enter; break;
      case CycleEvent::Kind::Output: kind = TraceRecord::Kind::Output; break;
      case CycleEvent::Kind::Input: kind = TraceRecord::Kind::Input; break;
      case CycleEvent::Kind::Dropped: kind = TraceRecord::Kind::Dropped; break;
      default: continue;
    }
    out.records.push_back({e.time, instances[e.instance], kind, e.name, e.value});
  }
  return out;
}

namespace {

const char* kind_name(CycleEvent::Kind kind) {
  switch (kind) {
    case CycleEvent::Kind::Enter: return "enter";
    case CycleEvent::Kind::SubState: return "substate";
    case CycleEvent::Kind::Output: return "output";
    case CycleEvent::Kind::Input: return "input";
    case CycleEvent::Kind::Dropped: return "dropped";
    case CycleEvent::Kind::MccStart: return "mcc-start";
    case CycleEvent::Kind::MccDone: return "mcc-done";
    case CycleEvent::Kind::Assign: return "assign";
  }
  return "?";
}

}  // namespace

std::string CycleTrace::to_text() const {
  std::ostringstream out;
  for (const auto& e : events) {
    out << instances[e.instance] << " cycle " << e.cycle << " t=" << to_decimal(e.time) << " s "
        << kind_name(e.kind) << ' ' << e.name;
    if (e.value) out << " = " << *e.value;
    out << '\n';
  }
  return out.str();
}

std::vector<CycleRow> CycleTrace::expand(const SystemIr& ir, int instance, std::uint64_t from,
                                         std::uint64_t to) const {
  const FsmIr& fsm = ir.instances.at(instance).fsm;
  std::vector<CycleRow> rows;
  int state = fsm.initial;
  std::uint64_t entered = 0, lag = 0;
  auto it = events.begin();
  for (std::uint64_t c = 0; c < to; ++c) {
    CycleRow row;
    row.cycle = c;
    for (; it != events.end(); ++it) {
      if (it->instance != instance) continue;
      if (it->cycle > c) break;
      if (it->kind == CycleEvent::Kind::Enter || it->kind == CycleEvent::Kind::SubState) {
        state = fsm.state_index(it->name);
        entered = it->cycle;
        lag = it->lag;
      } else if (it->cycle == c &&
                 (it->kind == CycleEvent::Kind::Output || it->kind == CycleEvent::Kind::MccStart)) {
        row.strobes.push_back(it->name);
      }
    }
    if (c < from) continue;
    row.state = state;
    if (auto t = fsm.states[state].timer) {
      const std::uint64_t count = c - entered;
      if (count < compensated_cycles(fsm.timers[*t].cycles, lag)) row.timer = count;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EquivalenceReport compare_traces(const EventTrace& reference, const CycleTrace& fsm,
                                 const Rational& horizon) {
  EquivalenceReport report;
  for (std::size_t i = 0; i < fsm.instances.size(); ++i) {
    const std::string& name = fsm.instances[i];
    const Rational period(1, static_cast<std::int64_t>(fsm.clock_hz[i]));
    std::vector<const TraceRecord*> ref;
    for (const auto& r : reference.records)
      if (r.instance == name && (r.kind == TraceRecord::Kind::Enter || r.kind == TraceRecord::Kind::Output))
        ref.push_back(&r);
    std::vector<const CycleEvent*> got;
    for (const auto& e : fsm.events)
      if (e.instance == static_cast<int>(i) &&
          (e.kind == CycleEvent::Kind::Enter || e.kind == CycleEvent::Kind::Output))
        got.push_back(&e);
    const std::size_t n = std::min(ref.size(), got.size());
    for (std::size_t k = 0; k < n; ++k) {
      const TraceRecord& r = *ref[k];
      const CycleEvent& e = *got[k];
      const bool same_kind = (r.kind == TraceRecord::Kind::Enter) == (e.kind == CycleEvent::Kind::Enter);
      if (!same_kind || r.name != e.name || r.payload != e.value) {
        report.mismatches.push_back(name + " record " + std::to_string(k) + ": reference " + r.name +
                                    " at " + to_decimal(r.time) + " s, fsm " + e.name + " at cycle " +
                                    std::to_string(e.cycle));
        break;
      }
      const Rational deviation = abs(e.time - r.time);
      report.worst_deviation = std::max(report.worst_deviation, deviation);
      ++report.compared;
      if (deviation > period + e.slack)
        report.mismatches.push_back(name + " " + r.name + ": fsm at " + to_decimal(e.time) +
                                    " s, reference at " + to_decimal(r.time) + " s, allowed " +
                                    to_decimal(period + e.slack) + " s");
    }
    // Unmatched tail records must sit at the horizon edge.
    bool tail_ok = true;
    for (std::size_t k = n; k < got.size(); ++k)
      tail_ok = tail_ok && horizon - got[k]->time <= period + got[k]->slack;
    const Rational edge = got.empty() ? period : period + got.back()->slack;
    for (std::size_t k = n; k < ref.size(); ++k) tail_ok = tail_ok && horizon - ref[k]->time <= edge;
    if (!tail_ok)
      report.mismatches.push_back(name + ": " + std::to_string(ref.size()) + " reference records, " +
                                  std::to_string(got.size()) + " fsm records");
  }
  report.equivalent = report.mismatches.empty();
  return report;
}

EquivalenceReport check_equivalence(const PsmSystem& system, const PsmModule& library,
                                    const SystemIr& ir, const std::vector<Stimulus>& stimulus,
                                    const Rational& horizon, const InterpretOptions& options) {
  SimOptions sim;
  sim.mcc_behavior = options.mcc_behavior;
  for (const auto& inst : ir.instances) {
    for (const auto& m : inst.fsm.mccs) {
      auto it = options.mcc_cycles.find(m.name);
      const std::int64_t cycles = it == options.mcc_cycles.end() ? 0 : static_cast<std::int64_t>(it->second);
      const Rational d(cycles, static_cast<std::int64_t>(inst.clock_hz));
      auto [pos, inserted] = sim.mcc_durations.emplace(m.name, d);
      if (!inserted && pos->second != d)
        fail("MCC '" + m.name + "' has different durations on differently clocked instances");
    }
  }
  const EventTrace reference = simulate(system, library, stimulus, horizon, sim);
  const CycleTrace cycles = interpret(ir, stimulus, horizon, options);
  return compare_traces(reference, cycles, horizon);
}

}  // namespace hhls
