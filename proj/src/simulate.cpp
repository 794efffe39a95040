#include <algorithm>
#include <deque>
#include <sstream>

#include "hhls/error.hpp"
#include "hhls/numfmt.hpp"
#include "hhls/psm.hpp"

namespace hhls {

std::int32_t wrap_to_width(std::int64_t value, int width) {
  if (width >= 32) return wrap32(value);
  const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
  std::uint64_t bits = static_cast<std::uint64_t>(value) & mask;
  if (bits & (std::uint64_t{1} << (width - 1))) bits |= ~mask;
  return static_cast<std::int32_t>(static_cast<std::int64_t>(bits));
}

namespace {

struct Delivery {
  std::string event;
  std::optional<std::int32_t> payload;
};

struct Runtime {
  std::string name;
  const PsmComponent* comp = nullptr;
  int state = -1;
  std::map<std::string, std::int32_t> values;
  std::size_t pc = 0;
  bool entry_done = false;
  bool internal_pending = false;
  std::optional<Rational> timer_at;
  std::optional<Rational> mcc_done_at;
  std::vector<std::int32_t> mcc_results;
  std::deque<Delivery> inbox;
};

class Simulator {
 public:
  Simulator(const PsmSystem& system, const PsmModule& library, const SimOptions& options)
      : system_(system), options_(options) {
    for (const auto& inst : system.instances) {
      const PsmComponent* comp = library.find_component(inst.component);
      if (!comp) fail("instance '" + inst.name + "' uses undeclared component '" + inst.component + "'");
      Runtime rt;
      rt.name = inst.name;
      rt.comp = comp;
      for (const auto& v : comp->variables) rt.values[v.name] = wrap_to_width(v.initial, v.width);
      for (const auto& e : comp->events)
        if (e.direction == Direction::Input && e.is_data()) rt.values[e.name] = 0;
      runtimes_.push_back(std::move(rt));
    }
  }

  EventTrace run(std::vector<Stimulus> stimulus, const Rational& horizon) {
    check_stimulus(stimulus, horizon);
    std::stable_sort(stimulus.begin(), stimulus.end(),
                     [](const Stimulus& a, const Stimulus& b) { return a.time < b.time; });
    std::size_t next_stim = 0;

    now_ = Rational(0);
    if (now_ >= horizon) return std::move(trace_);
    for (std::size_t i = 0; i < runtimes_.size(); ++i) {
      auto& rt = runtimes_[i];
      enter(i, rt.comp->state_index(rt.comp->initial));
    }
    while (true) {
      while (next_stim < stimulus.size() && stimulus[next_stim].time == now_) {
        const auto& s = stimulus[next_stim++];
        int idx = system_.instance_index(s.target.instance);
        runtimes_[idx].inbox.push_back({s.target.event, s.payload});
      }
      settle();

      std::optional<Rational> next;
      auto consider = [&](const std::optional<Rational>& t) {
        if (t && (!next || *t < *next)) next = t;
      };
      if (next_stim < stimulus.size()) consider(stimulus[next_stim].time);
      for (const auto& rt : runtimes_) {
        consider(rt.timer_at);
        consider(rt.mcc_done_at);
      }
      if (!next || *next >= horizon) break;
      now_ = *next;
    }
    return std::move(trace_);
  }

 private:
  void check_stimulus(const std::vector<Stimulus>& stimulus, const Rational& horizon) {
    for (const auto& s : stimulus) {
      const std::string where = s.target.instance + "." + s.target.event;
      int idx = system_.instance_index(s.target.instance);
      if (idx < 0) fail("unconnected stimulus target '" + where + "': no such instance");
      const EventDecl* e = runtimes_[idx].comp->find_event(s.target.event);
      if (!e || e->direction != Direction::Input)
        fail("unconnected stimulus target '" + where + "': no such input event");
      if (e->is_data() != s.payload.has_value())
        fail("payload type mismatch for '" + where + "'" +
             (e->is_data() ? ": data event needs a value" : ": event carries no data"));
      if (s.payload && wrap_to_width(*s.payload, *e->payload_width) != *s.payload)
        fail("payload type mismatch for '" + where + "': value does not fit " +
             std::to_string(*e->payload_width) + " bits");
      if (s.time < Rational(0) || s.time >= horizon)
        fail("stimulus time for '" + where + "' outside [0, horizon)");
    }
  }

  std::int32_t lookup(const Runtime& rt, const std::string& name) const {
    auto it = rt.values.find(name);
    if (it != rt.values.end()) return it->second;
    for (const auto& c : rt.comp->constants)
      if (c.name == name) return wrap32(c.value);
    fail("undeclared name '" + name + "' in instance '" + rt.name + "'");
  }

  std::int32_t eval(const Runtime& rt, const Expr& e) const {
    return evaluate(e, [&](const std::string& n) { return lookup(rt, n); });
  }

  void record(std::size_t i, TraceRecord::Kind kind, const std::string& name,
              std::optional<std::int32_t> payload = std::nullopt) {
    trace_.records.push_back({now_, runtimes_[i].name, kind, name, payload});
  }

  void emit(std::size_t i, const std::string& event, std::optional<std::int32_t> payload) {
    record(i, TraceRecord::Kind::Output, event, payload);
    for (const auto& c : system_.connections) {
      if (c.source.instance != runtimes_[i].name || c.source.event != event) continue;
      int dst = system_.instance_index(c.destination.instance);
      if (dst >= 0) runtimes_[dst].inbox.push_back({c.destination.event, payload});
    }
  }

  void enter(std::size_t i, int state) {
    auto& rt = runtimes_[i];
    rt.state = state;
    rt.pc = 0;
    rt.entry_done = false;
    rt.internal_pending = false;
    rt.timer_at.reset();
    rt.mcc_done_at.reset();
    record(i, TraceRecord::Kind::Enter, rt.comp->states[state].name);
    run_entry(i);
  }

  void assign(Runtime& rt, const std::string& variable, std::int64_t value) {
    int width = kDefaultWidth;
    for (const auto& v : rt.comp->variables)
      if (v.name == variable) width = v.width;
    rt.values[variable] = wrap_to_width(value, width);
  }

  // Executes entry actions from the current pc until completion or until an
  // MCC with non-zero duration suspends the entry.
  void run_entry(std::size_t i) {
    auto& rt = runtimes_[i];
    const State& st = rt.comp->states[rt.state];
    while (rt.pc < st.entry.size()) {
      const Action& action = st.entry[rt.pc++];
      if (const auto* n = std::get_if<NotifyAction>(&action.kind)) {
        emit(i, n->event, std::nullopt);
      } else if (const auto* x = std::get_if<ExportAction>(&action.kind)) {
        const EventDecl* e = rt.comp->find_event(x->event);
        emit(i, x->event, wrap_to_width(eval(rt, x->value), e ? e->payload_width.value_or(32) : 32));
      } else if (const auto* a = std::get_if<AssignAction>(&action.kind)) {
        assign(rt, a->variable, eval(rt, a->value));
      } else if (const auto* m = std::get_if<InvokeAction>(&action.kind)) {
        std::vector<std::int32_t> args;
        for (const auto& arg : m->arguments) args.push_back(lookup(rt, arg));
        rt.mcc_results = options_.mcc_behavior(m->mcc, args, m->results.size());
        rt.mcc_results.resize(m->results.size(), 0);
        auto d = options_.mcc_durations.find(m->mcc);
        if (d != options_.mcc_durations.end() && d->second.is_positive()) {
          rt.mcc_done_at = now_ + d->second;
          return;
        }
        finish_mcc(rt, *m);
      }
    }
    rt.entry_done = true;
    rt.internal_pending = true;
    const TimingSpec spec = st.timing();
    if (spec.is_finite()) rt.timer_at = now_ + spec.duration;
  }

  void finish_mcc(Runtime& rt, const InvokeAction& m) {
    for (std::size_t k = 0; k < m.results.size(); ++k) assign(rt, m.results[k], rt.mcc_results[k]);
    rt.mcc_done_at.reset();
  }

  bool handle_input(std::size_t i, const Delivery& d) {
    auto& rt = runtimes_[i];
    const State& st = rt.comp->states[rt.state];
    if (!rt.entry_done) {
      record(i, TraceRecord::Kind::Dropped, d.event, d.payload);
      return true;
    }
    for (const auto& imp : st.imports) {
      if (imp.event != d.event) continue;
      record(i, TraceRecord::Kind::Input, d.event, d.payload);
      if (d.payload) rt.values[d.event] = *d.payload;
      enter(i, rt.comp->state_index(imp.target));
      return true;
    }
    record(i, TraceRecord::Kind::Dropped, d.event, d.payload);
    return true;
  }

  void count_zero_time_step() {
    if (++zero_time_steps_ > options_.delta_limit)
      fail("zero-time transitions did not settle after " + std::to_string(options_.delta_limit) +
           " steps at t=" + to_decimal(now_) + " s");
  }

  // Runs every transition due at the current time to quiescence, in instance
  // declaration order, external events before internal transitions.
  void settle() {
    zero_time_steps_ = 0;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (std::size_t i = 0; i < runtimes_.size(); ++i) {
        auto& rt = runtimes_[i];
        while (!rt.inbox.empty()) {
          Delivery d = std::move(rt.inbox.front());
          rt.inbox.pop_front();
          handle_input(i, d);
          progressed = true;
        }
        if (rt.mcc_done_at && *rt.mcc_done_at == now_) {
          const State& st = rt.comp->states[rt.state];
          finish_mcc(rt, std::get<InvokeAction>(st.entry[rt.pc - 1].kind));
          run_entry(i);
          progressed = true;
          continue;
        }
        if (!rt.entry_done) continue;
        const State& st = rt.comp->states[rt.state];
        if (rt.internal_pending) {
          rt.internal_pending = false;
          bool fired = false;
          for (const auto& g : st.guards) {
            if (eval(rt, g.condition) != 0) {
              count_zero_time_step();
              enter(i, rt.comp->state_index(g.target));
              fired = progressed = true;
              break;
            }
          }
          if (fired) continue;
          if (st.timed && st.timed->spec.is_delta()) {
            count_zero_time_step();
            enter(i, rt.comp->state_index(*st.timed->target));
            progressed = true;
            continue;
          }
        }
        if (rt.timer_at && *rt.timer_at == now_) {
          enter(i, rt.comp->state_index(*st.timed->target));
          progressed = true;
        }
      }
    }
  }

  const PsmSystem& system_;
  const SimOptions& options_;
  std::vector<Runtime> runtimes_;
  EventTrace trace_;
  Rational now_;
  std::size_t zero_time_steps_ = 0;
};

}  // namespace

EventTrace simulate(const PsmSystem& system, const PsmModule& library,
                    const std::vector<Stimulus>& stimulus, const Rational& horizon,
                    const SimOptions& options) {
  Simulator sim(system, library, options);
  return sim.run(stimulus, horizon);
}

std::vector<Stimulus> parse_stimulus(const std::string& text) {
  std::vector<Stimulus> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find("//"); hash != std::string_view::npos) view = view.substr(0, hash);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto bad = [&](const std::string& why) {
      fail("stimulus line " + std::to_string(lineno) + ": " + why);
    };
    // Duration may contain a space before its unit: split at the target token.
    std::size_t dot = view.find('.', view.find_first_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_"));
    std::size_t target_start = view.rfind(' ', dot);
    if (dot == std::string_view::npos || target_start == std::string_view::npos)
      bad("expected '<time> <instance>.<event> [= value]'");
    auto time = parse_duration(trim(view.substr(0, target_start)));
    if (!time) bad("bad time '" + std::string(trim(view.substr(0, target_start))) + "'");
    std::string_view rest = trim(view.substr(target_start + 1));
    std::optional<std::int32_t> payload;
    if (auto eq = rest.find('='); eq != std::string_view::npos) {
      auto value = parse_decimal(trim(rest.substr(eq + 1)));
      if (!value || value->den() != 1 || value->num() < INT32_MIN || value->num() > INT32_MAX)
        bad("bad payload value");
      payload = static_cast<std::int32_t>(value->num());
      rest = trim(rest.substr(0, eq));
    }
    auto sep = rest.find('.');
    if (sep == std::string_view::npos || sep == 0 || sep + 1 == rest.size())
      bad("expected '<instance>.<event>'");
    out.push_back({*time, {std::string(rest.substr(0, sep)), std::string(rest.substr(sep + 1))}, payload});
  }
  return out;
}

}  // namespace hhls
