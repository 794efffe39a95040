#include "hhls/psm.hpp"

#include <algorithm>
#include <set>

namespace hhls {

std::string to_string(const SourceSpan& span) {
  return (span.file.empty() ? std::string("<input>") : span.file) + ":" +
         std::to_string(span.line) + ":" + std::to_string(span.column);
}

const State* PsmComponent::find_state(const std::string& state) const {
  for (const auto& s : states)
    if (s.name == state) return &s;
  return nullptr;
}

const EventDecl* PsmComponent::find_event(const std::string& event) const {
  for (const auto& e : events)
    if (e.name == event) return &e;
  return nullptr;
}

const MccSignature* PsmComponent::find_mcc(const std::string& mcc) const {
  for (const auto& m : mccs)
    if (m.name == mcc) return &m;
  return nullptr;
}

int PsmComponent::state_index(const std::string& state) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i].name == state) return static_cast<int>(i);
  return -1;
}

const Instance* PsmSystem::find_instance(const std::string& instance) const {
  for (const auto& i : instances)
    if (i.name == instance) return &i;
  return nullptr;
}

int PsmSystem::instance_index(const std::string& instance) const {
  for (std::size_t i = 0; i < instances.size(); ++i)
    if (instances[i].name == instance) return static_cast<int>(i);
  return -1;
}

const PsmComponent* PsmModule::find_component(const std::string& name) const {
  for (const auto& c : components)
    if (c.name == name) return &c;
  return nullptr;
}

const PsmSystem* PsmModule::find_system(const std::string& name) const {
  for (const auto& s : systems)
    if (s.name == name) return &s;
  return nullptr;
}

void PsmModule::merge(PsmModule other) {
  for (auto& c : other.components) components.push_back(std::move(c));
  for (auto& s : other.systems) systems.push_back(std::move(s));
}

Rational instance_period(const Instance& instance, const PsmComponent& component) {
  return instance.period ? *instance.period : component.period;
}

PsmSystem single_instance_system(const PsmComponent& component) {
  PsmSystem system;
  system.name = component.name;
  system.instances.push_back({component.name, component.name, std::nullopt, component.span});
  for (const auto& e : component.events)
    system.ports.push_back({e.name, e.direction, {component.name, e.name}, e.span});
  return system;
}

bool ValidationReport::ok() const { return error_count() == 0; }

std::size_t ValidationReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(), [](const auto& f) {
    return f.severity == Finding::Severity::Error;
  }));
}

std::size_t ValidationReport::count(const std::string& code) const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [&](const auto& f) { return f.code == code; }));
}

std::vector<std::string> find_delta_cycle(const PsmComponent& model) {
  const std::size_t n = model.states.size();
  std::vector<int> next(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = model.states[i];
    if (s.timed && s.timed->spec.is_delta() && s.timed->target)
      next[i] = model.state_index(*s.timed->target);
  }
  // Every state has at most one delta successor, so walking from each start
  // either terminates or enters a cycle.
  std::vector<int> color(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (color[start] != 0) continue;
    std::vector<int> path;
    int v = static_cast<int>(start);
    while (v >= 0 && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next[v];
    }
    if (v >= 0 && color[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      std::vector<std::string> cycle;
      for (; it != path.end(); ++it) cycle.push_back(model.states[*it].name);
      return cycle;
    }
    for (int p : path) color[p] = 2;
  }
  return {};
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void error(const std::string& code, const std::string& message, const SourceSpan& at) {
    report_.findings.push_back({Finding::Severity::Error, code, message, at});
  }
  void warning(const std::string& code, const std::string& message, const SourceSpan& at) {
    report_.findings.push_back({Finding::Severity::Warning, code, message, at});
  }

 private:
  ValidationReport& report_;
};

template <typename Range, typename NameOf>
void check_unique(Checker& check, const Range& items, NameOf name_of, const std::string& what,
                  std::set<std::string>& seen) {
  for (const auto& item : items) {
    const std::string& name = name_of(item);
    if (!seen.insert(name).second)
      check.error("duplicate-declaration", "duplicate " + what + " '" + name + "'", item.span);
  }
}

}  // namespace

ValidationReport validate_component(const PsmComponent& model) {
  ValidationReport report;
  Checker check(report);

  if (!model.period.is_positive())
    check.error("non-positive-period", "component '" + model.name + "' period must be positive",
                model.span);

  std::set<std::string> values;  // shared namespace of expression identifiers
  check_unique(check, model.events, [](const auto& e) -> const std::string& { return e.name; },
               "event", values);
  check_unique(check, model.variables, [](const auto& v) -> const std::string& { return v.name; },
               "variable", values);
  check_unique(check, model.constants, [](const auto& c) -> const std::string& { return c.name; },
               "constant", values);
  std::set<std::string> mccs;
  check_unique(check, model.mccs, [](const auto& m) -> const std::string& { return m.name; }, "mcc",
               mccs);
  std::set<std::string> states;
  check_unique(check, model.states, [](const auto& s) -> const std::string& { return s.name; },
               "state", states);

  for (const auto& e : model.events) {
    if (e.payload_width && (*e.payload_width < 1 || *e.payload_width > 32))
      check.error("bad-width", "event '" + e.name + "' payload width must be in 1..32", e.span);
  }
  for (const auto& v : model.variables) {
    if (v.width < 1 || v.width > 32)
      check.error("bad-width", "variable '" + v.name + "' width must be in 1..32", v.span);
  }

  auto is_variable = [&](const std::string& n) {
    return std::any_of(model.variables.begin(), model.variables.end(),
                       [&](const auto& v) { return v.name == n; });
  };
  auto is_constant = [&](const std::string& n) {
    return std::any_of(model.constants.begin(), model.constants.end(),
                       [&](const auto& c) { return c.name == n; });
  };
  auto is_readable = [&](const std::string& n) {
    if (is_variable(n) || is_constant(n)) return true;
    const EventDecl* e = model.find_event(n);
    return e && e->direction == Direction::Input && e->is_data();
  };
  auto check_expr = [&](const Expr& expr, const SourceSpan& at) {
    for (const auto& n : expr.names())
      if (!is_readable(n))
        check.error("unresolved-reference", "undeclared name '" + n + "' in expression", at);
  };
  auto check_target = [&](const std::string& target, const SourceSpan& at) {
    if (!model.find_state(target))
      check.error("unresolved-reference", "transition target '" + target + "' is not a state", at);
  };

  if (model.initial.empty()) {
    check.error("missing-initial", "component '" + model.name + "' declares no initial state",
                model.span);
  } else if (!model.find_state(model.initial)) {
    check.error("unresolved-reference", "initial state '" + model.initial + "' is not declared",
                model.span);
  }

  for (const auto& state : model.states) {
    for (const auto& action : state.entry) {
      std::visit(
          [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, NotifyAction>) {
              const EventDecl* e = model.find_event(a.event);
              if (!e)
                check.error("unresolved-reference", "notify of undeclared event '" + a.event + "'",
                            action.span);
              else if (e->direction != Direction::Output || e->is_data())
                check.error("bad-action", "notify requires a non-data output event, '" + a.event +
                                              "' is not one",
                            action.span);
            } else if constexpr (std::is_same_v<T, ExportAction>) {
              const EventDecl* e = model.find_event(a.event);
              if (!e)
                check.error("unresolved-reference", "export of undeclared event '" + a.event + "'",
                            action.span);
              else if (e->direction != Direction::Output || !e->is_data())
                check.error("bad-action",
                            "export requires a data output event, '" + a.event + "' is not one",
                            action.span);
              check_expr(a.value, action.span);
            } else if constexpr (std::is_same_v<T, AssignAction>) {
              if (!is_variable(a.variable))
                check.error("unresolved-reference",
                            "assignment to undeclared variable '" + a.variable + "'", action.span);
              check_expr(a.value, action.span);
            } else {
              const MccSignature* m = model.find_mcc(a.mcc);
              if (!m) {
                check.error("unresolved-reference", "invoke of undeclared mcc '" + a.mcc + "'",
                            action.span);
              } else if (static_cast<int>(a.arguments.size()) != m->arguments ||
                         static_cast<int>(a.results.size()) != m->results) {
                check.error("arity-mismatch", "invoke of '" + a.mcc + "' expects " +
                                                  std::to_string(m->arguments) + " arguments and " +
                                                  std::to_string(m->results) + " results",
                            action.span);
              }
              for (const auto& arg : a.arguments)
                if (!is_readable(arg))
                  check.error("unresolved-reference", "undeclared mcc argument '" + arg + "'",
                              action.span);
              for (const auto& res : a.results)
                if (!is_variable(res))
                  check.error("unresolved-reference", "mcc result '" + res + "' is not a variable",
                              action.span);
            }
          },
          action.kind);
    }

    std::set<std::string> imported;
    for (const auto& imp : state.imports) {
      const EventDecl* e = model.find_event(imp.event);
      if (!e)
        check.error("unresolved-reference", "import of undeclared event '" + imp.event + "'",
                    imp.span);
      else if (e->direction != Direction::Input)
        check.error("bad-import", "import requires an input event, '" + imp.event + "' is an output",
                    imp.span);
      if (!imported.insert(imp.event).second)
        check.error("duplicate-import",
                    "state '" + state.name + "' imports '" + imp.event + "' more than once",
                    imp.span);
      check_target(imp.target, imp.span);
    }
    for (const auto& g : state.guards) {
      check_expr(g.condition, g.span);
      check_target(g.target, g.span);
    }
    if (state.timed) {
      const auto& t = *state.timed;
      if (t.spec.is_finite() && !t.spec.duration.is_positive())
        check.error("non-positive-duration",
                    "timing specification of state '" + state.name + "' must be positive", t.span);
      if (t.spec.is_infinite() && t.target)
        check.error("infinite-with-target",
                    "state '" + state.name + "' has ts(inf) and an internal transition target",
                    t.span);
      if (!t.spec.is_infinite()) {
        if (!t.target)
          check.error("missing-target", "state '" + state.name + "' timing spec needs a target",
                      t.span);
        else
          check_target(*t.target, t.span);
      }
    }
  }

  auto cycle = find_delta_cycle(model);
  if (!cycle.empty()) {
    std::string path;
    for (const auto& s : cycle) path += s + " -> ";
    path += cycle.front();
    const State* first = model.find_state(cycle.front());
    check.error("delta-cycle", "zero-time cycle through ts(delta) states: " + path,
                first ? first->span : model.span);
  }

  // Reachability from the initial state is advisory only.
  if (model.find_state(model.initial)) {
    std::set<std::string> seen{model.initial};
    std::vector<std::string> work{model.initial};
    while (!work.empty()) {
      const State* s = model.find_state(work.back());
      work.pop_back();
      if (!s) continue;
      auto visit = [&](const std::string& t) {
        if (model.find_state(t) && seen.insert(t).second) work.push_back(t);
      };
      for (const auto& i : s->imports) visit(i.target);
      for (const auto& g : s->guards) visit(g.target);
      if (s->timed && s->timed->target) visit(*s->timed->target);
    }
    for (const auto& s : model.states)
      if (!seen.count(s.name))
        check.warning("unreachable-state", "state '" + s.name + "' is unreachable from '" +
                                               model.initial + "'",
                      s.span);
  }
  return report;
}

ValidationReport validate_system(const PsmSystem& system, const PsmModule& library) {
  ValidationReport report;
  Checker check(report);

  std::set<std::string> names;
  for (const auto& inst : system.instances) {
    if (!names.insert(inst.name).second)
      check.error("duplicate-declaration", "duplicate instance '" + inst.name + "'", inst.span);
    if (!library.find_component(inst.component))
      check.error("unresolved-reference",
                  "instance '" + inst.name + "' uses undeclared component '" + inst.component + "'",
                  inst.span);
    if (inst.period && !inst.period->is_positive())
      check.error("non-positive-period", "instance '" + inst.name + "' period must be positive",
                  inst.span);
  }

  auto resolve = [&](const Endpoint& ep, const SourceSpan& at) -> const EventDecl* {
    const Instance* inst = system.find_instance(ep.instance);
    if (!inst) {
      check.error("dangling-endpoint", "connection names undeclared instance '" + ep.instance + "'",
                  at);
      return nullptr;
    }
    const PsmComponent* comp = library.find_component(inst->component);
    if (!comp) return nullptr;
    const EventDecl* e = comp->find_event(ep.event);
    if (!e)
      check.error("dangling-endpoint", "instance '" + ep.instance + "' has no event '" + ep.event +
                                           "'",
                  at);
    return e;
  };

  std::map<Endpoint, int> drivers;
  for (const auto& c : system.connections) {
    const EventDecl* src = resolve(c.source, c.span);
    const EventDecl* dst = resolve(c.destination, c.span);
    if (src && src->direction != Direction::Output)
      check.error("bad-connection",
                  c.source.instance + "." + c.source.event + " is not an output event", c.span);
    if (dst && dst->direction != Direction::Input)
      check.error("bad-connection",
                  c.destination.instance + "." + c.destination.event + " is not an input event",
                  c.span);
    if (src && dst && src->payload_width != dst->payload_width)
      check.error("payload-mismatch",
                  "payload of " + c.source.instance + "." + c.source.event + " does not match " +
                      c.destination.instance + "." + c.destination.event,
                  c.span);
    if (++drivers[c.destination] == 2)
      check.error("multiple-drivers",
                  c.destination.instance + "." + c.destination.event + " has more than one driver",
                  c.span);
  }

  std::set<std::string> ports;
  for (const auto& p : system.ports) {
    if (!ports.insert(p.name).second)
      check.error("duplicate-declaration", "duplicate port '" + p.name + "'", p.span);
    const EventDecl* e = resolve(p.binding, p.span);
    if (e && e->direction != p.direction)
      check.error("bad-port", "port '" + p.name + "' direction does not match its binding", p.span);
    if (p.direction == Direction::Input && ++drivers[p.binding] == 2)
      check.error("multiple-drivers",
                  p.binding.instance + "." + p.binding.event + " has more than one driver", p.span);
  }
  return report;
}

std::vector<std::int32_t> zero_mcc_behavior(const std::string&, const std::vector<std::int32_t>&,
                                            std::size_t results) {
  return std::vector<std::int32_t>(results, 0);
}

std::vector<TraceRecord> EventTrace::select(const std::string& instance,
                                            TraceRecord::Kind kind) const {
  std::vector<TraceRecord> out;
  for (const auto& r : records)
    if (r.instance == instance && r.kind == kind) out.push_back(r);
  return out;
}

std::string EventTrace::to_text() const {
  std::string out;
  for (const auto& r : records) {
    out += to_decimal(r.time);
    out += ' ';
    out += r.instance;
    switch (r.kind) {
      case TraceRecord::Kind::Enter: out += " enter "; break;
      case TraceRecord::Kind::Input: out += " in "; break;
      case TraceRecord::Kind::Output: out += " out "; break;
      case TraceRecord::Kind::Dropped: out += " drop "; break;
    }
    out += r.name;
    if (r.payload) out += " = " + std::to_string(*r.payload);
    out += '\n';
  }
  return out;
}

}  // namespace hhls
