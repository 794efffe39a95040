#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhls/psm.hpp"
#include "hhls/rational.hpp"

namespace hhls {

struct CycleCount {
  std::uint64_t cycles = 1;
  Rational error;  // |cycles / f - duration| in seconds
};

// round-half-up(duration * hz), at least 1 cycle.
CycleCount time_to_cycles(const Rational& duration, std::uint64_t hz);

// Sub-states of one PSM state. A state whose entry invokes k MCCs becomes
// Entry, then (Wait, Resume) k times; the last sub-state owns the PSM
// transitions.
enum class SubStateKind { Entry, Wait, Resume };

struct FsmState {
  std::string name;  // PSM state name, or "<state>__wait<k>" / "<state>__run<k>"
  int psm_state = 0;
  SubStateKind kind = SubStateKind::Entry;
  int step = 0;                        // invoke number for Wait / Resume
  std::vector<Action> actions;         // executed in the first cycle
  std::optional<InvokeAction> invoke;  // start strobe after `actions`
  bool settles = false;
  std::optional<std::size_t> timer;  // index into FsmIr::timers
};

enum class Condition { Always, MccDone, Request, Guard, Delta, TimerDone, Hold };

const char* to_string(Condition condition);

struct FsmRow {
  Condition condition = Condition::Hold;
  std::string event;  // Request
  Expr guard;         // Guard
  int next = 0;
  bool first_cycle_only = false;  // guards and delta are tested once, on settling
};

struct TimerGeneric {
  std::string state;
  std::string parameter;  // T_<STATE>_CYCLES
  Rational duration;
  std::uint64_t cycles = 1;
  Rational error;
};

struct MccPlaceholder {
  std::string name;
  int arguments = 0;
  int results = 0;
};

struct FsmIr {
  PsmComponent source;
  std::uint64_t clock_hz = 0;
  std::vector<FsmState> states;
  std::vector<std::vector<FsmRow>> rows;  // per state, priority order, ends with Always or Hold
  int initial = 0;
  std::vector<TimerGeneric> timers;
  std::vector<MccPlaceholder> mccs;  // one start/done pair per invoked MCC

  int state_index(const std::string& name) const;
  // Sub-state 0 of a PSM state.
  int entry_of(int psm_state) const;
};

// Throws for invalid models and for zero-time (delta) cycles.
FsmIr synthesize_component(const PsmComponent& model, std::uint64_t clock_hz);

struct FsmInstance {
  std::string name;
  std::uint64_t clock_hz = 0;
  FsmIr fsm;
};

struct FsmLink {
  int source = 0;
  std::string source_event;
  int destination = 0;
  std::string destination_event;
  std::optional<int> width;
  bool crossing = false;  // endpoints run on different clocks
};

struct SystemIr {
  std::string name;
  std::vector<FsmInstance> instances;
  std::vector<FsmLink> links;
  std::vector<Port> ports;

  int instance_index(const std::string& name) const;
};

// `hz` gives each instance's clock; instances missing from it use
// `default_hz` or raise an error.
SystemIr synthesize_system(const PsmSystem& system, const PsmModule& library,
                           const std::map<std::string, std::uint64_t>& hz,
                           std::optional<std::uint64_t> default_hz = std::nullopt);

// ---------------------------------------------------------------------------
// Cycle-level interpretation

struct CycleEvent {
  enum class Kind { Enter, SubState, Output, Input, Dropped, MccStart, MccDone, Assign };

  std::uint64_t cycle = 0;  // in the instance's own clock
  Rational time;            // cycle / f
  int instance = 0;
  Kind kind = Kind::Enter;
  std::string name;
  std::optional<std::int32_t> value;
  // Deviation bound versus untimed semantics: one cycle per import, guard or
  // delta step, two per MCC handshake, the receiver's quantization per
  // delivery and each timer's rounding, minus the lag a timer absorbed.
  Rational slack;
  // Cycles this entry trails its ideal instant (imports, zero-time steps and
  // MCC handshakes); the state's timer is shortened by this much.
  std::uint64_t lag = 0;
};

// Latency of the two-flop synchronizer on a clock-domain crossing.
inline constexpr std::uint64_t kSyncCycles = 2;

// Largest lag the hardware register holds; it saturates there.
inline constexpr std::uint64_t kLagMax = 255;

// Effective timer length for a state entered with `lag`: at least one cycle.
inline std::uint64_t compensated_cycles(std::uint64_t cycles, std::uint64_t lag) {
  return lag >= cycles ? 1 : cycles - lag;
}

// One expanded cycle of an instance.
struct CycleRow {
  std::uint64_t cycle = 0;
  int state = 0;
  std::optional<std::uint64_t> timer;  // count of the running timer
  std::vector<std::string> strobes;    // outputs and MCC starts asserted
};

// Event-compressed trace: idle cycles are not stored but can be expanded.
struct CycleTrace {
  std::vector<std::string> instances;
  std::vector<std::uint64_t> clock_hz;
  std::vector<CycleEvent> events;    // time order
  std::vector<std::uint64_t> cycles;  // per instance, cycles interpreted

  std::vector<CycleRow> expand(const SystemIr& ir, int instance, std::uint64_t from,
                               std::uint64_t to) const;
  EventTrace to_event_trace() const;
  std::string to_text() const;
};

struct InterpretOptions {
  std::map<std::string, std::uint64_t> mcc_cycles;  // datapath latency per MCC (default 0)
  MccBehavior mcc_behavior = zero_mcc_behavior;
  std::uint64_t step_limit = 50'000'000;
};

// Runs the FSMs over [0, horizon). Stimulus at time t reaches instance i in
// cycle ceil(t * f_i); requests to an instance that is waiting on an MCC are
// held until it settles.
CycleTrace interpret(const SystemIr& ir, const std::vector<Stimulus>& stimulus, const Rational& horizon,
                     const InterpretOptions& options = {});

// VCD text: state codes, output and MCC strobes, variables; 1 ps resolution.
std::string to_vcd(const SystemIr& ir, const CycleTrace& trace);

struct EquivalenceReport {
  bool equivalent = true;
  std::vector<std::string> mismatches;
  Rational worst_deviation;  // seconds, over matched records
  std::size_t compared = 0;
};

// Compares state entries and outputs per instance: identical sequences, each
// FSM timestamp within one clock period plus the record's slack of the
// reference timestamp. Records that only one side has are tolerated when they
// fall within that bound of the horizon.
EquivalenceReport compare_traces(const EventTrace& reference, const CycleTrace& fsm,
                                 const Rational& horizon);

// Runs both semantics with matching MCC timing (L cycles at the instance
// clock) and compares them.
EquivalenceReport check_equivalence(const PsmSystem& system, const PsmModule& library,
                                    const SystemIr& ir, const std::vector<Stimulus>& stimulus,
                                    const Rational& horizon, const InterpretOptions& options = {});

// ---------------------------------------------------------------------------
// RTL

// Verilog-2001 text: shared hhls_timer / hhls_handshake / hhls_sync2 modules,
// one module per component FSM and a top-level module wiring the instances.
std::string emit_rtl(const SystemIr& ir);

// Human-readable summary of states, timers and handshakes.
std::string fsm_report(const SystemIr& ir);

}  // namespace hhls
