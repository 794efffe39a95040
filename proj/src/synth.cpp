#include <algorithm>
#include <cctype>
#include <set>

#include "hhls/error.hpp"
#include "hhls/fsm.hpp"

namespace hhls {

CycleCount time_to_cycles(const Rational& duration, std::uint64_t hz) {
  if (!duration.is_positive()) fail("time_to_cycles: duration must be positive");
  if (hz == 0) fail("time_to_cycles: frequency must be positive");
  const Rational exact = duration * Rational(static_cast<std::int64_t>(hz));
  std::int64_t cycles = (exact + Rational(1, 2)).floor();
  if (cycles < 1) cycles = 1;
  Rational error = Rational(cycles, static_cast<std::int64_t>(hz)) - duration;
  if (error < Rational(0)) error = -error;
  return {static_cast<std::uint64_t>(cycles), error};
}

const char* to_string(Condition condition) {
  switch (condition) {
    case Condition::Always: return "always";
    case Condition::MccDone: return "mcc-done";
    case Condition::Request: return "request";
    case Condition::Guard: return "guard";
    case Condition::Delta: return "delta";
    case Condition::TimerDone: return "timer-done";
    case Condition::Hold: return "hold";
  }
  return "?";
}

int FsmIr::state_index(const std::string& name) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].name == name) return static_cast<int>(i);
  return -1;
}

int FsmIr::entry_of(int psm_state) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].psm_state == psm_state && states[i].kind == SubStateKind::Entry)
      return static_cast<int>(i);
  return -1;
}

int SystemIr::instance_index(const std::string& name) const {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].name == name) return static_cast<int>(i);
  return -1;
}

namespace {

std::string upper(std::string text) {
  for (char& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return text;
}

void require_valid(const ValidationReport& report, const std::string& what) {
  if (report.ok()) return;
  std::string message = what + " does not validate:";
  for (const auto& f : report.findings)
    if (f.severity == Finding::Severity::Error) message += "\n  " + f.code + ": " + f.message;
  fail(message);
}

}  // namespace

FsmIr synthesize_component(const PsmComponent& model, std::uint64_t clock_hz) {
  if (clock_hz == 0) fail("component '" + model.name + "': clock frequency must be positive");
  require_valid(validate_component(model), "component '" + model.name + "'");
  if (auto cycle = find_delta_cycle(model); !cycle.empty()) {
    std::string chain;
    for (const auto& s : cycle) chain += (chain.empty() ? "" : " -> ") + s;
    fail("component '" + model.name + "': unschedulable zero-time cycle " + chain);
  }

  FsmIr ir;
  ir.source = model;
  ir.clock_hz = clock_hz;

  // Sub-states first, so transition rows can name their targets.
  std::vector<int> settle_of(model.states.size());
  for (std::size_t p = 0; p < model.states.size(); ++p) {
    const State& st = model.states[p];
    FsmState cur;
    cur.name = st.name;
    cur.psm_state = static_cast<int>(p);
    int step = 0;
    for (const Action& action : st.entry) {
      if (const auto* m = std::get_if<InvokeAction>(&action.kind)) {
        cur.invoke = *m;
        ir.states.push_back(std::move(cur));
        ++step;
        FsmState wait;
        wait.name = st.name + "__wait" + std::to_string(step);
        wait.psm_state = static_cast<int>(p);
        wait.kind = SubStateKind::Wait;
        wait.step = step;
        ir.states.push_back(std::move(wait));
        cur = FsmState{};
        cur.name = st.name + "__run" + std::to_string(step);
        cur.psm_state = static_cast<int>(p);
        cur.kind = SubStateKind::Resume;
        cur.step = step;
      } else {
        cur.actions.push_back(action);
      }
    }
    cur.settles = true;
    settle_of[p] = static_cast<int>(ir.states.size());
    ir.states.push_back(std::move(cur));
  }
  std::set<std::string> names;
  for (const auto& s : ir.states)
    if (!names.insert(s.name).second)
      fail("component '" + model.name + "': generated FSM state name '" + s.name +
           "' collides with a declared state");

  std::set<std::string> parameters;
  for (std::size_t p = 0; p < model.states.size(); ++p) {
    const State& st = model.states[p];
    if (!st.timing().is_finite()) continue;
    TimerGeneric t;
    t.state = st.name;
    t.parameter = "T_" + upper(st.name) + "_CYCLES";
    for (int k = 2; parameters.count(t.parameter); ++k)
      t.parameter = "T_" + upper(st.name) + "_" + std::to_string(k) + "_CYCLES";
    parameters.insert(t.parameter);
    t.duration = st.timing().duration;
    auto count = time_to_cycles(t.duration, clock_hz);
    t.cycles = count.cycles;
    t.error = count.error;
    ir.states[settle_of[p]].timer = ir.timers.size();
    ir.timers.push_back(std::move(t));
  }

  ir.rows.resize(ir.states.size());
  for (std::size_t i = 0; i < ir.states.size(); ++i) {
    const FsmState& s = ir.states[i];
    auto& rows = ir.rows[i];
    const int self = static_cast<int>(i);
    if (s.kind == SubStateKind::Wait) {
      rows.push_back({Condition::MccDone, {}, {}, self + 1, false});
      rows.push_back({Condition::Hold, {}, {}, self, false});
      continue;
    }
    if (!s.settles) {
      rows.push_back({Condition::Always, {}, {}, self + 1, false});
      continue;
    }
    const State& st = model.states[s.psm_state];
    auto target = [&](const std::string& name) { return ir.entry_of(model.state_index(name)); };
    for (const auto& imp : st.imports)
      rows.push_back({Condition::Request, imp.event, {}, target(imp.target), false});
    for (const auto& g : st.guards)
      rows.push_back({Condition::Guard, {}, g.condition, target(g.target), true});
    if (st.timed && st.timed->target) {
      if (st.timed->spec.is_delta())
        rows.push_back({Condition::Delta, {}, {}, target(*st.timed->target), true});
      else if (st.timed->spec.is_finite())
        rows.push_back({Condition::TimerDone, {}, {}, target(*st.timed->target), false});
    }
    rows.push_back({Condition::Hold, {}, {}, self, false});
  }

  for (const auto& s : ir.states) {
    if (!s.invoke) continue;
    const std::string& name = s.invoke->mcc;
    if (std::any_of(ir.mccs.begin(), ir.mccs.end(), [&](const auto& m) { return m.name == name; }))
      continue;
    const MccSignature* sig = model.find_mcc(name);
    MccPlaceholder m;
    m.name = name;
    m.arguments = sig ? sig->arguments : static_cast<int>(s.invoke->arguments.size());
    m.results = sig ? sig->results : static_cast<int>(s.invoke->results.size());
    ir.mccs.push_back(std::move(m));
  }
  ir.initial = ir.entry_of(model.state_index(model.initial));
  return ir;
}

SystemIr synthesize_system(const PsmSystem& system, const PsmModule& library,
                           const std::map<std::string, std::uint64_t>& hz,
                           std::optional<std::uint64_t> default_hz) {
  require_valid(validate_system(system, library), "system '" + system.name + "'");
  for (const auto& [name, f] : hz)
    if (system.instance_index(name) < 0)
      fail("frequency given for unknown instance '" + name + "'");

  SystemIr ir;
  ir.name = system.name;
  ir.ports = system.ports;
  std::map<std::pair<std::string, std::uint64_t>, FsmIr> cache;
  for (const auto& inst : system.instances) {
    auto it = hz.find(inst.name);
    std::uint64_t f = 0;
    if (it != hz.end()) f = it->second;
    else if (default_hz) f = *default_hz;
    else fail("no clock frequency for instance '" + inst.name + "'");
    if (f == 0) fail("instance '" + inst.name + "': clock frequency must be positive");
    const PsmComponent* comp = library.find_component(inst.component);
    auto key = std::make_pair(inst.component, f);
    auto c = cache.find(key);
    if (c == cache.end()) c = cache.emplace(key, synthesize_component(*comp, f)).first;
    ir.instances.push_back({inst.name, f, c->second});
  }
  for (const auto& conn : system.connections) {
    FsmLink link;
    link.source = ir.instance_index(conn.source.instance);
    link.destination = ir.instance_index(conn.destination.instance);
    link.source_event = conn.source.event;
    link.destination_event = conn.destination.event;
    const EventDecl* out = ir.instances[link.source].fsm.source.find_event(conn.source.event);
    const EventDecl* in = ir.instances[link.destination].fsm.source.find_event(conn.destination.event);
    if (out->payload_width != in->payload_width)
      fail("width mismatch on connection " + conn.source.instance + "." + conn.source.event +
           " -> " + conn.destination.instance + "." + conn.destination.event);
    link.width = out->payload_width;
    link.crossing = ir.instances[link.source].clock_hz != ir.instances[link.destination].clock_hz;
    ir.links.push_back(std::move(link));
  }
  return ir;
}

}  // namespace hhls
