#include <cctype>
#include <set>

#include "doctest.h"
#include "hhls/error.hpp"
#include "hhls/fsm.hpp"
#include "support.hpp"

using namespace hhls;
using namespace hhls::test;

namespace {

std::vector<std::int32_t> sum_behavior(const std::string&, const std::vector<std::int32_t>& args,
                                       std::size_t results) {
  std::int32_t sum = 0;
  for (auto a : args) sum += a;
  return std::vector<std::int32_t>(results, sum);
}

struct Case {
  std::vector<std::string> files;
  std::string system;  // empty: the first component alone
  std::string stimulus;
  Rational horizon;
};

const std::vector<Case>& cases() {
  static const std::vector<Case> all = {
      {{"mhr.psm"}, "", "mhr_start.stim", Rational(2)},
      {{"mhr.psm"}, "", "mhr_samples.stim", Rational(2)},
      {{"delta_pair.psm"}, "", "", Rational(7, 2)},
      {{"delta_chain.psm"}, "", "chain_go.stim", Rational(1, 10)},
      {{"accumulator.psm"}, "", "accumulator.stim", Rational(1, 10)},
      {{"idle.psm"}, "", "", Rational(1)},
      {{"pingpong.psm"}, "PingPong", "pingpong.stim", Rational(1, 20)},
      {{"mhr.psm", "wpm.psm"}, "WPM", "wpm.stim", Rational(1, 2)},
  };
  return all;
}

PsmSystem system_of(const PsmModule& m, const Case& c) {
  if (!c.system.empty()) return *m.find_system(c.system);
  return single_instance_system(m.components.front());
}

InterpretOptions options() {
  InterpretOptions opt;
  opt.mcc_behavior = sum_behavior;
  opt.mcc_cycles = {{"MHR", 40}, {"Filter", 7}, {"SPO2", 5}, {"EMG", 30}};
  return opt;
}

std::vector<std::string> entries(const EventTrace& t, const std::string& instance) {
  std::vector<std::string> out;
  for (const auto& r : t.select(instance, TraceRecord::Kind::Enter)) out.push_back(r.name);
  return out;
}

PsmComponent component(const std::string& text) {
  auto parsed = parse_component(text);
  REQUIRE(parsed.ok());
  return *parsed.value;
}

}  // namespace

TEST_CASE("time_to_cycles") {
  auto c = time_to_cycles(Rational(1, 2), 102'000'000);
  CHECK(c.cycles == 51'000'000);
  CHECK(c.error == Rational(0));

  c = time_to_cycles(Rational(1, 7'000'000), 7'000'000);
  CHECK(c.cycles == 1);
  CHECK(c.error == Rational(0));

  c = time_to_cycles(Rational(1, 1000), 999);
  CHECK(c.cycles == 1);
  CHECK(c.error == Rational(1, 999) - Rational(1, 1000));

  CHECK(time_to_cycles(Rational(3, 2), 1).cycles == 2);  // half rounds up
  CHECK(time_to_cycles(Rational(5, 2), 1).cycles == 3);
  CHECK(time_to_cycles(Rational(1, 10), 3).cycles == 1);  // 0.3 clamps to 1
  CHECK_THROWS_AS(time_to_cycles(Rational(0), 10), Error);
  CHECK_THROWS_AS(time_to_cycles(Rational(1), 0), Error);
}

TEST_CASE("time_to_cycles error is within half a period") {
  for (std::int64_t us = 1; us < 2000; us += 37)
    for (std::uint64_t hz : {999ULL, 32'768ULL, 1'000'003ULL}) {
      auto c = time_to_cycles(Rational(us, 1'000'000), hz);
      if (c.cycles > 1) CHECK(c.error <= Rational(1, 2 * static_cast<std::int64_t>(hz)));
    }
}

TEST_CASE("synthesize the heart rate monitor") {
  auto m = fixture_module({"mhr.psm"});
  const FsmIr fsm = synthesize_component(m.components.front(), 102'000'000);
  REQUIRE(fsm.timers.size() == 1);
  CHECK(fsm.timers[0].state == "WaitSample");
  CHECK(fsm.timers[0].parameter == "T_WAITSAMPLE_CYCLES");
  CHECK(fsm.timers[0].cycles == 51'000'000);
  const int init = fsm.state_index("Init");
  REQUIRE(init >= 0);
  CHECK(fsm.initial == init);
  CHECK(fsm.rows[init][0].condition == Condition::Request);
  CHECK(fsm.rows[init][0].event == "Start");
  CHECK(fsm.states[fsm.rows[init][0].next].name == "WaitSample");
  REQUIRE(fsm.mccs.size() == 1);
  CHECK(fsm.mccs[0].name == "MHR");
  // ProcessSample splits around its MCC invocation.
  CHECK(fsm.state_index("ProcessSample__wait1") >= 0);
  CHECK(fsm.state_index("ProcessSample__run1") >= 0);
  CHECK_FALSE(fsm.states[fsm.state_index("ProcessSample")].settles);
  CHECK(fsm.states[fsm.state_index("ProcessSample__run1")].settles);
}

TEST_CASE("infinite single state has no timer and no transitions") {
  const FsmIr fsm = synthesize_component(component(R"(component One {
    period 1 ms; initial S; state S { ts(inf); } })"), 1000);
  CHECK(fsm.timers.empty());
  REQUIRE(fsm.rows.size() == 1);
  REQUIRE(fsm.rows[0].size() == 1);
  CHECK(fsm.rows[0][0].condition == Condition::Hold);
}

TEST_CASE("one MCC invocation gives one start/done pair") {
  auto m = fixture_module({"accumulator.psm"});
  const FsmIr fsm = synthesize_component(m.components.front(), 1'000'000);
  REQUIRE(fsm.mccs.size() == 1);
  CHECK(fsm.mccs[0].arguments == 2);
  CHECK(fsm.mccs[0].results == 1);
  int waits = 0;
  for (const auto& s : fsm.states) waits += s.kind == SubStateKind::Wait;
  CHECK(waits == 1);
}

TEST_CASE("transition tables are total and deterministic") {
  for (const auto& c : cases()) {
    auto m = fixture_module(c.files);
    for (const auto& comp : m.components) {
      const FsmIr fsm = synthesize_component(comp, 12'345'678);
      std::size_t finite = 0;
      for (const auto& s : comp.states) finite += s.timing().is_finite();
      CHECK(fsm.timers.size() == finite);
      for (std::size_t i = 0; i < fsm.states.size(); ++i) {
        const auto& rows = fsm.rows[i];
        REQUIRE_FALSE(rows.empty());
        // Exactly one terminal row, and it is last.
        const auto last = rows.back().condition;
        CHECK((last == Condition::Always || last == Condition::Hold));
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
          CHECK(rows[k].condition != Condition::Always);
          CHECK(rows[k].condition != Condition::Hold);
        }
        std::set<std::string> events;
        for (const auto& r : rows) {
          CHECK(r.next >= 0);
          CHECK(r.next < static_cast<int>(fsm.states.size()));
          if (r.condition == Condition::Request) CHECK(events.insert(r.event).second);
          if (r.condition == Condition::TimerDone) CHECK(fsm.states[i].timer.has_value());
        }
      }
    }
  }
}

TEST_CASE("zero-time cycles are rejected") {
  const auto comp = component(R"(component Loop {
    period 1 ms; initial A;
    state A { ts(delta) -> B; }
    state B { ts(delta) -> A; } })");
  CHECK_THROWS_WITH_AS(synthesize_component(comp, 1000), doctest::Contains("zero-time cycle"), Error);
}

TEST_CASE("generics follow the instance clock") {
  auto parsed = parse_module(R"(component Tick {
    period 10 ms; output event T; initial S;
    state S { notify T; ts(10 ms) -> S; } }
    system Two { instance slow : Tick; instance fast : Tick; })");
  REQUIRE(parsed.ok());
  const auto& m = *parsed.value;
  auto ir = synthesize_system(*m.find_system("Two"), m, {{"slow", 1'000'000}, {"fast", 2'000'000}});
  CHECK(ir.instances[0].fsm.timers[0].cycles == 10'000);
  CHECK(ir.instances[1].fsm.timers[0].cycles == 20'000);

  // Same real-time behaviour within one clock period each.
  auto trace = interpret(ir, {}, Rational(1, 20));
  auto events = trace.to_event_trace();
  auto slow = events.select("slow", TraceRecord::Kind::Enter);
  auto fast = events.select("fast", TraceRecord::Kind::Enter);
  REQUIRE(slow.size() == fast.size());
  for (std::size_t k = 0; k < slow.size(); ++k) CHECK(slow[k].time == fast[k].time);

  CHECK_THROWS_AS(synthesize_system(*m.find_system("Two"), m, {{"slow", 0}, {"fast", 1}}), Error);
  CHECK_THROWS_AS(synthesize_system(*m.find_system("Two"), m, {{"slow", 1}}), Error);
  CHECK_THROWS_AS(synthesize_system(*m.find_system("Two"), m, {{"slow", 1}, {"fast", 1}, {"x", 1}}), Error);
}

TEST_CASE("system without connections") {
  auto m = fixture_module({"idle.psm", "empty.psm"});
  auto ir = synthesize_system(*m.find_system("Empty"), m, {});
  CHECK(ir.instances.empty());
  CHECK(ir.links.empty());
  const std::string rtl = emit_rtl(ir);
  CHECK(rtl.find("module Empty_top") != std::string::npos);
  const std::string top = rtl.substr(rtl.find("module Empty_top"));
  CHECK(top.find(" u_") == std::string::npos);
}

TEST_CASE("WPM system has seven wired instances") {
  auto m = fixture_module({"mhr.psm", "wpm.psm"});
  const PsmSystem& sys = *m.find_system("WPM");
  auto ir = synthesize_system(sys, m, {}, 10'000'000);
  CHECK(ir.instances.size() == 7);
  CHECK(ir.links.size() == sys.connections.size());
  for (const auto& l : ir.links) CHECK_FALSE(l.crossing);
}

TEST_CASE("heart rate monitor reports bradycardia after 500 ms") {
  auto m = fixture_module({"mhr.psm"});
  const auto sys = single_instance_system(m.components.front());
  auto ir = synthesize_system(sys, m, {}, 102'000'000);
  const auto trace = interpret(ir, fixture_stimulus("mhr_start.stim"), Rational(1));
  std::optional<std::uint64_t> cycle;
  for (const auto& e : trace.events)
    if (e.kind == CycleEvent::Kind::Enter && e.name == "ReportBradycardia") cycle = e.cycle;
  REQUIRE(cycle);
  // Accepting Start costs a cycle, which WaitSample's timer absorbs.
  CHECK(*cycle == 51'000'000);
  const auto ref = simulate(sys, m, fixture_stimulus("mhr_start.stim"), Rational(1));
  CHECK(entries(ref, "MHR") == entries(trace.to_event_trace(), "MHR"));
}

TEST_CASE("delta chain advances one cycle per state") {
  auto m = fixture_module({"delta_chain.psm"});
  auto ir = synthesize_system(single_instance_system(m.components.front()), m, {}, 1'000'000);
  const auto trace = interpret(ir, fixture_stimulus("chain_go.stim"), Rational(1, 100));
  std::map<std::string, std::uint64_t> at;
  for (const auto& e : trace.events)
    if (e.kind == CycleEvent::Kind::Enter) at[e.name] = e.cycle;
  REQUIRE(at.count("C"));
  CHECK(at["A"] == 1001);  // Go lands in cycle 1000
  CHECK(at["B"] == at["A"] + 1);
  CHECK(at["C"] == at["A"] + 2);
}

TEST_CASE("delta pair matches the reference timing") {
  auto m = fixture_module({"delta_pair.psm"});
  const auto sys = single_instance_system(m.components.front());
  const auto ref = simulate(sys, m, {}, Rational(7, 2));
  std::vector<Rational> b;
  for (const auto& r : ref.select("Pair", TraceRecord::Kind::Enter))
    if (r.name == "B") b.push_back(r.time);
  CHECK(b == std::vector<Rational>{Rational(0), Rational(1), Rational(2), Rational(3)});
  auto ir = synthesize_system(sys, m, {}, 1000);
  const auto trace = interpret(ir, {}, Rational(7, 2));
  CHECK(entries(ref, "Pair") == entries(trace.to_event_trace(), "Pair"));
}

TEST_CASE("idle model keeps its state") {
  auto m = fixture_module({"idle.psm"});
  auto ir = synthesize_system(single_instance_system(m.components.front()), m, {}, 1000);
  const auto trace = interpret(ir, {}, Rational(1));
  CHECK(trace.events.size() == 1);
  const auto rows = trace.expand(ir, 0, 0, 200);
  REQUIRE(rows.size() == 200);
  for (const auto& r : rows) {
    CHECK(r.state == ir.instances[0].fsm.initial);
    CHECK(r.strobes.empty());
  }
}

TEST_CASE("expanded rows show timer counts and strobes") {
  auto parsed = parse_component(R"(component Blink {
    period 1 ms; output event On; initial A;
    state A { notify On; ts(4 ms) -> A; } })");
  REQUIRE(parsed.ok());
  PsmModule m;
  m.components.push_back(*parsed.value);
  auto ir = synthesize_system(single_instance_system(m.components[0]), m, {}, 1000);
  const auto trace = interpret(ir, {}, Rational(1, 50));
  const auto rows = trace.expand(ir, 0, 0, 12);
  REQUIRE(rows.size() == 12);
  for (std::uint64_t c = 0; c < 12; ++c) {
    CHECK(rows[c].cycle == c);
    CHECK(rows[c].strobes.size() == (c % 4 == 0 ? 1u : 0u));
    REQUIRE(rows[c].timer);
    CHECK(*rows[c].timer == c % 4);
  }
}

TEST_CASE("requests wait while an MCC runs") {
  auto m = fixture_module({"accumulator.psm"});
  const auto sys = single_instance_system(m.components.front());
  auto ir = synthesize_system(sys, m, {}, 1000);
  InterpretOptions opt = options();
  opt.mcc_cycles = {{"Filter", 5}};
  // The second sample lands during the 5-cycle filter run. It is held until
  // Filter settles (cycle 9), which has no import for it, so it is dropped
  // there, as the reference drops it.
  std::vector<Stimulus> stim = {{Rational(1, 1000), {"Accumulator", "In"}, 10},
                                {Rational(3, 1000), {"Accumulator", "In"}, 20}};
  const auto trace = interpret(ir, stim, Rational(1, 50), opt);
  std::vector<std::uint64_t> inputs, dropped;
  for (const auto& e : trace.events) {
    if (e.kind == CycleEvent::Kind::Input) inputs.push_back(e.cycle);
    if (e.kind == CycleEvent::Kind::Dropped) dropped.push_back(e.cycle);
  }
  CHECK(inputs == std::vector<std::uint64_t>{1});
  CHECK(dropped == std::vector<std::uint64_t>{9});
  const auto ref = simulate(sys, m, stim, Rational(1, 50), {{{"Filter", Rational(5, 1000)}}});
  CHECK(ref.select("Accumulator", TraceRecord::Kind::Dropped).size() == 1);
}

TEST_CASE("reference and FSM agree on every fixture") {
  for (std::uint64_t hz : {1'000'000ULL, 3'000'001ULL, 102'000'000ULL}) {
    for (const auto& c : cases()) {
      auto m = fixture_module(c.files);
      const auto sys = system_of(m, c);
      const auto stim = c.stimulus.empty() ? std::vector<Stimulus>{} : fixture_stimulus(c.stimulus);
      const auto ir = synthesize_system(sys, m, {}, hz);
      const auto rep = check_equivalence(sys, m, ir, stim, c.horizon, options());
      INFO(sys.name << " @ " << hz << " Hz");
      for (const auto& x : rep.mismatches) MESSAGE(x);
      CHECK(rep.equivalent);
      CHECK(rep.compared > 0);
    }
  }
}

TEST_CASE("reference and FSM agree across clock domains") {
  auto m = fixture_module({"mhr.psm", "wpm.psm"});
  const PsmSystem& wpm = *m.find_system("WPM");
  const std::map<std::string, std::uint64_t> clocks = {
      {"controller", 1'000'000}, {"mhr", 102'000'000}, {"spo2", 103'000'000}, {"emg", 96'000'000},
      {"storage", 2'000'000},    {"monitor", 1'000'000}, {"comm", 500'000}};
  auto ir = synthesize_system(wpm, m, clocks);
  int crossings = 0;
  for (const auto& l : ir.links) crossings += l.crossing;
  CHECK(crossings > 0);
  auto opt = options();
  opt.mcc_cycles.erase("MHR");  // MCC durations are per name, so keep them at zero across clocks
  opt.mcc_cycles.erase("SPO2");
  opt.mcc_cycles.erase("EMG");
  auto rep = check_equivalence(wpm, m, ir, fixture_stimulus("wpm.stim"), Rational(1, 2), opt);
  for (const auto& x : rep.mismatches) MESSAGE(x);
  CHECK(rep.equivalent);

  auto pp = fixture_module({"pingpong.psm"});
  auto pir = synthesize_system(*pp.find_system("PingPong"), pp, {{"left", 1'000'000}, {"right", 3'000'000}});
  rep = check_equivalence(*pp.find_system("PingPong"), pp, pir, fixture_stimulus("pingpong.stim"),
                          Rational(1, 20), opt);
  for (const auto& x : rep.mismatches) MESSAGE(x);
  CHECK(rep.equivalent);
}

TEST_CASE("state sequences do not depend on the clock") {
  for (const auto& c : cases()) {
    auto m = fixture_module(c.files);
    const auto sys = system_of(m, c);
    const auto stim = c.stimulus.empty() ? std::vector<Stimulus>{} : fixture_stimulus(c.stimulus);
    // MCC latencies are cycle counts, so only zero-latency MCCs are clock independent.
    InterpretOptions opt = options();
    opt.mcc_cycles.clear();
    // Horizon moved off the fixtures' timer grid so rounding cannot move a
    // record across it.
    const Rational horizon = c.horizon + Rational(1, 1000);
    auto a = interpret(synthesize_system(sys, m, {}, 2'000'000), stim, horizon, opt).to_event_trace();
    auto b = interpret(synthesize_system(sys, m, {}, 7'000'003), stim, horizon, opt).to_event_trace();
    for (const auto& inst : sys.instances) CHECK(entries(a, inst.name) == entries(b, inst.name));
  }
}

TEST_CASE("interpretation and emission are deterministic") {
  auto m = fixture_module({"mhr.psm", "wpm.psm"});
  const PsmSystem& wpm = *m.find_system("WPM");
  auto ir = synthesize_system(wpm, m, {}, 4'000'000);
  const auto stim = fixture_stimulus("wpm.stim");
  const auto a = interpret(ir, stim, Rational(1, 2), options());
  const auto b = interpret(ir, stim, Rational(1, 2), options());
  CHECK(a.to_text() == b.to_text());
  CHECK(to_vcd(ir, a) == to_vcd(ir, b));
  CHECK(emit_rtl(ir) == emit_rtl(synthesize_system(wpm, m, {}, 4'000'000)));
}

TEST_CASE("VCD output") {
  auto m = fixture_module({"mhr.psm"});
  auto ir = synthesize_system(single_instance_system(m.components.front()), m, {}, 102'000'000);
  const auto trace = interpret(ir, fixture_stimulus("mhr_start.stim"), Rational(1));
  const std::string vcd = to_vcd(ir, trace);
  CHECK(vcd.find("$timescale 1ps $end") != std::string::npos);
  CHECK(vcd.find("$scope module MHR $end") != std::string::npos);
  CHECK(vcd.find("$enddefinitions $end") != std::string::npos);
  // Cycle 51,000,000 at 102 MHz is exactly 500 ms.
  CHECK(vcd.find("\n#500000000000\nb101 !\n") != std::string::npos);
}

TEST_CASE("RTL structure") {
  auto m = fixture_module({"mhr.psm"});
  auto ir = synthesize_system(single_instance_system(m.components.front()), m, {}, 102'000'000);
  const std::string rtl = emit_rtl(ir);
  for (const char* needle :
       {"module hhls_timer", "module hhls_handshake", "module hhls_sync2", "module MHR_fsm",
        "parameter CLK_HZ = 102000000", "parameter T_WAITSAMPLE_CYCLES = 51000000", "input  wire Start_req",
        "output reg  Start_ack", "output reg  mcc_MHR_start", "input  wire mcc_MHR_done",
        ".T_WAITSAMPLE_CYCLES(51000000)", "module MHR_top"})
    CHECK_MESSAGE(rtl.find(needle) != std::string::npos, needle);
  auto words = [&](const std::string& w) {
    int n = 0;
    auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    for (std::size_t p = 0; (p = rtl.find(w, p)) != std::string::npos; p += w.size())
      if ((p == 0 || !ident(rtl[p - 1])) && (p + w.size() >= rtl.size() || !ident(rtl[p + w.size()]))) ++n;
    return n;
  };
  const int begins = words("begin"), ends = words("end");
  CHECK(words("module") == words("endmodule"));
  CHECK(words("case") == words("endcase"));
  CHECK(begins == ends);
}

TEST_CASE("RTL golden file") {
  auto m = fixture_module({"mhr.psm"});
  auto ir = synthesize_system(single_instance_system(m.components.front()), m, {}, 102'000'000);
  CHECK(emit_rtl(ir) == read_file(kFixtureDir + "/golden/mhr.v"));
}
