#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hhls/expr.hpp"
#include "hhls/rational.hpp"

namespace hhls {

// Location of a construct in a source text. Spans are provenance only: two
// models that differ only in spans compare equal.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 1;

  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

std::string to_string(const SourceSpan& span);

struct TimingSpec {
  enum class Kind { Finite, Infinite, Delta };

  Kind kind = Kind::Infinite;
  Rational duration;  // seconds, meaningful only for Finite

  static TimingSpec finite(Rational seconds) { return {Kind::Finite, seconds}; }
  static TimingSpec infinite() { return {Kind::Infinite, {}}; }
  static TimingSpec delta() { return {Kind::Delta, {}}; }

  bool is_finite() const { return kind == Kind::Finite; }
  bool is_delta() const { return kind == Kind::Delta; }
  bool is_infinite() const { return kind == Kind::Infinite; }

  friend bool operator==(const TimingSpec& a, const TimingSpec& b) {
    return a.kind == b.kind && (a.kind != Kind::Finite || a.duration == b.duration);
  }
};

enum class Direction { Input, Output };

inline constexpr int kDefaultWidth = 32;

struct EventDecl {
  std::string name;
  Direction direction = Direction::Input;
  std::optional<int> payload_width;  // signed integer bits; present iff data event
  SourceSpan span;

  bool is_data() const { return payload_width.has_value(); }
  friend bool operator==(const EventDecl&, const EventDecl&) = default;
};

struct NotifyAction {
  std::string event;
  friend bool operator==(const NotifyAction&, const NotifyAction&) = default;
};

struct ExportAction {
  std::string event;
  Expr value;
  friend bool operator==(const ExportAction&, const ExportAction&) = default;
};

struct AssignAction {
  std::string variable;
  Expr value;
  friend bool operator==(const AssignAction&, const AssignAction&) = default;
};

struct InvokeAction {
  std::string mcc;
  std::vector<std::string> arguments;
  std::vector<std::string> results;
  friend bool operator==(const InvokeAction&, const InvokeAction&) = default;
};

struct Action {
  std::variant<NotifyAction, ExportAction, AssignAction, InvokeAction> kind;
  SourceSpan span;
  friend bool operator==(const Action&, const Action&) = default;
};

struct ExternalTransition {
  std::string event;
  std::string target;
  SourceSpan span;
  friend bool operator==(const ExternalTransition&, const ExternalTransition&) = default;
};

struct GuardTransition {
  Expr condition;
  std::string target;
  SourceSpan span;
  friend bool operator==(const GuardTransition&, const GuardTransition&) = default;
};

// Internal transition governed by a timing specification. Infinite specs have
// no target.
struct TimedTransition {
  TimingSpec spec;
  std::optional<std::string> target;
  SourceSpan span;
  friend bool operator==(const TimedTransition&, const TimedTransition&) = default;
};

struct State {
  std::string name;
  std::vector<Action> entry;
  std::vector<ExternalTransition> imports;
  std::vector<GuardTransition> guards;  // first true guard wins
  std::optional<TimedTransition> timed;  // absent means ts(inf)
  SourceSpan span;

  TimingSpec timing() const { return timed ? timed->spec : TimingSpec::infinite(); }
  friend bool operator==(const State&, const State&) = default;
};

struct Variable {
  std::string name;
  int width = kDefaultWidth;
  std::int64_t initial = 0;
  SourceSpan span;
  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Constant {
  std::string name;
  std::int64_t value = 0;
  SourceSpan span;
  friend bool operator==(const Constant&, const Constant&) = default;
};

struct MccSignature {
  std::string name;
  int arguments = 0;
  int results = 0;
  std::optional<std::string> dfg;  // path of the dataflow graph, if known
  SourceSpan span;
  friend bool operator==(const MccSignature&, const MccSignature&) = default;
};

struct PsmComponent {
  std::string name;
  Rational period;  // seconds
  std::vector<EventDecl> events;
  std::vector<Variable> variables;
  std::vector<Constant> constants;
  std::vector<MccSignature> mccs;
  std::vector<State> states;
  std::string initial;
  SourceSpan span;

  const State* find_state(const std::string& state) const;
  const EventDecl* find_event(const std::string& event) const;
  const MccSignature* find_mcc(const std::string& mcc) const;
  int state_index(const std::string& state) const;  // -1 if absent
  friend bool operator==(const PsmComponent&, const PsmComponent&) = default;
};

struct Instance {
  std::string name;
  std::string component;
  std::optional<Rational> period;  // override of the component period
  SourceSpan span;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct Endpoint {
  std::string instance;
  std::string event;
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
  friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

struct Connection {
  Endpoint source;
  Endpoint destination;
  SourceSpan span;
  friend bool operator==(const Connection&, const Connection&) = default;
};

// External port of a system bound to an instance event. Input ports drive an
// instance input, output ports observe an instance output.
struct Port {
  std::string name;
  Direction direction = Direction::Input;
  Endpoint binding;
  SourceSpan span;
  friend bool operator==(const Port&, const Port&) = default;
};

struct PsmSystem {
  std::string name;
  std::vector<Instance> instances;
  std::vector<Connection> connections;
  std::vector<Port> ports;
  SourceSpan span;

  const Instance* find_instance(const std::string& instance) const;
  int instance_index(const std::string& instance) const;
  friend bool operator==(const PsmSystem&, const PsmSystem&) = default;
};

// A parsed source unit: every component and system declared in it.
struct PsmModule {
  std::vector<PsmComponent> components;
  std::vector<PsmSystem> systems;

  const PsmComponent* find_component(const std::string& name) const;
  const PsmSystem* find_system(const std::string& name) const;
  void merge(PsmModule other);
  friend bool operator==(const PsmModule&, const PsmModule&) = default;
};

// Effective period of an instance (override or component period).
Rational instance_period(const Instance& instance, const PsmComponent& component);

// Wraps a single component into a system with one instance named after it.
PsmSystem single_instance_system(const PsmComponent& component);

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  std::string code;  // stable identifier, e.g. "unresolved-reference"
  std::string message;
  SourceSpan location;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool ok() const;  // no errors (warnings allowed)
  std::size_t error_count() const;
  std::size_t count(const std::string& code) const;
};

ValidationReport validate_component(const PsmComponent& model);

// Validates the system against the component library (instances resolve,
// connection endpoints, payload agreement, single driver per input).
ValidationReport validate_system(const PsmSystem& system, const PsmModule& library);

// Names of states that form a cycle through ts(delta) transitions, empty if
// none.
std::vector<std::string> find_delta_cycle(const PsmComponent& model);

// ---------------------------------------------------------------------------
// Reference simulation

struct TraceRecord {
  enum class Kind { Enter, Input, Output, Dropped };

  Rational time;
  std::string instance;
  Kind kind = Kind::Enter;
  std::string name;  // state or event
  std::optional<std::int32_t> payload;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct EventTrace {
  std::vector<TraceRecord> records;

  // Records of one kind for one instance, in order.
  std::vector<TraceRecord> select(const std::string& instance, TraceRecord::Kind kind) const;
  std::string to_text() const;
  friend bool operator==(const EventTrace&, const EventTrace&) = default;
};

// Stimulus entry: an input event applied to an instance at a time.
struct Stimulus {
  Rational time;
  Endpoint target;
  std::optional<std::int32_t> payload;
};

// Deterministic stand-in for multi-cycle computations during simulation and
// FSM interpretation: maps (mcc, arguments) to results.
using MccBehavior = std::function<std::vector<std::int32_t>(
    const std::string& mcc, const std::vector<std::int32_t>& arguments, std::size_t results)>;

std::vector<std::int32_t> zero_mcc_behavior(const std::string&, const std::vector<std::int32_t>&,
                                            std::size_t results);

struct SimOptions {
  // Real-time duration of each MCC invocation, keyed by MCC name (default 0).
  std::map<std::string, Rational> mcc_durations;
  MccBehavior mcc_behavior = zero_mcc_behavior;
  std::size_t delta_limit = 10000;
};

// Discrete-event simulation over [0, horizon). Throws hhls::Error for bad
// stimulus targets, payload mismatches, or a divergent zero-time cycle.
EventTrace simulate(const PsmSystem& system, const PsmModule& library,
                    const std::vector<Stimulus>& stimulus, const Rational& horizon,
                    const SimOptions& options = {});

// Sign-extends the low `width` bits of value.
std::int32_t wrap_to_width(std::int64_t value, int width);

// Stimulus text: one entry per line, "<duration> <instance>.<event> [= value]".
std::vector<Stimulus> parse_stimulus(const std::string& text);

}  // namespace hhls
