#include <algorithm>
#include <map>
#include <sstream>

#include "hhls/fsm.hpp"

namespace hhls {

namespace {

std::string code_of(std::size_t index) {
  std::string code;
  do {
    code += static_cast<char>('!' + index % 94);
    index /= 94;
  } while (index > 0);
  return code;
}

std::string binary(std::uint64_t value, int width) {
  std::string bits;
  for (int b = width - 1; b >= 0; --b) bits += ((value >> b) & 1) ? '1' : '0';
  return bits;
}

int bits_for(std::uint64_t values) {
  int bits = 1;
  while (bits < 64 && (std::uint64_t{1} << bits) < values) ++bits;
  return bits;
}

std::uint64_t picoseconds(std::uint64_t cycle, std::uint64_t hz) {
  const unsigned __int128 ps = static_cast<unsigned __int128>(cycle) * 1'000'000'000'000ULL / hz;
  return static_cast<std::uint64_t>(ps);
}

struct Signal {
  std::string scope;
  std::string name;
  int width = 1;
  std::string code;
};

struct Change {
  std::uint64_t time = 0;
  int order = 0;  // strobe releases before new values at the same time
  std::size_t signal = 0;
  std::string value;
};

}  // namespace

std::string to_vcd(const SystemIr& ir, const CycleTrace& trace) {
  std::vector<Signal> signals;
  std::vector<Change> changes;
  // Per instance lookup of signal indices.
  std::vector<std::size_t> state_signal(ir.instances.size());
  std::vector<std::map<std::string, std::size_t>> strobe(ir.instances.size());
  std::vector<std::map<std::string, std::size_t>> data(ir.instances.size());
  std::vector<std::map<std::string, std::size_t>> variable(ir.instances.size());
  std::vector<int> state_width(ir.instances.size());

  auto add = [&](const std::string& scope, const std::string& name, int width) {
    signals.push_back({scope, name, width, code_of(signals.size())});
    return signals.size() - 1;
  };
  for (std::size_t i = 0; i < ir.instances.size(); ++i) {
    const auto& inst = ir.instances[i];
    const FsmIr& fsm = inst.fsm;
    state_width[i] = bits_for(fsm.states.size());
    state_signal[i] = add(inst.name, "state", state_width[i]);
    changes.push_back({0, 0, state_signal[i], binary(fsm.initial, state_width[i])});
    for (const auto& e : fsm.source.events) {
      if (e.direction != Direction::Output) continue;
      strobe[i][e.name] = add(inst.name, e.name + "_req", 1);
      changes.push_back({0, 0, strobe[i][e.name], "0"});
      if (e.is_data()) {
        data[i][e.name] = add(inst.name, e.name + "_data", *e.payload_width);
        changes.push_back({0, 0, data[i][e.name], binary(0, *e.payload_width)});
      }
    }
    for (const auto& m : fsm.mccs) {
      strobe[i]["mcc_" + m.name] = add(inst.name, "mcc_" + m.name + "_start", 1);
      changes.push_back({0, 0, strobe[i]["mcc_" + m.name], "0"});
    }
    for (const auto& v : fsm.source.variables) {
      variable[i][v.name] = add(inst.name, v.name, v.width);
      changes.push_back({0, 0, variable[i][v.name],
                         binary(static_cast<std::uint32_t>(wrap_to_width(v.initial, v.width)), v.width)});
    }
    for (const auto& e : fsm.source.events) {
      if (e.direction != Direction::Input || !e.is_data()) continue;
      variable[i][e.name] = add(inst.name, e.name, *e.payload_width);
      changes.push_back({0, 0, variable[i][e.name], binary(0, *e.payload_width)});
    }
  }

  for (const auto& e : trace.events) {
    const auto i = static_cast<std::size_t>(e.instance);
    const std::uint64_t hz = ir.instances[i].clock_hz;
    const std::uint64_t t = picoseconds(e.cycle, hz);
    switch (e.kind) {
      case CycleEvent::Kind::Enter:
      case CycleEvent::Kind::SubState: {
        int s = ir.instances[i].fsm.state_index(e.name);
        changes.push_back({t, 1, state_signal[i], binary(static_cast<std::uint64_t>(s), state_width[i])});
        break;
      }
      case CycleEvent::Kind::Output:
      case CycleEvent::Kind::MccStart: {
        const std::string key = e.kind == CycleEvent::Kind::Output ? e.name : "mcc_" + e.name;
        auto it = strobe[i].find(key);
        if (it == strobe[i].end()) break;
        changes.push_back({t, 1, it->second, "1"});
        changes.push_back({picoseconds(e.cycle + 1, hz), 0, it->second, "0"});
        if (e.value) {
          auto d = data[i].find(e.name);
          if (d != data[i].end())
            changes.push_back({t, 1, d->second, binary(static_cast<std::uint32_t>(*e.value), signals[d->second].width)});
        }
        break;
      }
      case CycleEvent::Kind::Assign:
      case CycleEvent::Kind::Input: {
        if (!e.value) break;
        auto it = variable[i].find(e.name);
        if (it == variable[i].end()) break;
        changes.push_back({t, 1, it->second, binary(static_cast<std::uint32_t>(*e.value), signals[it->second].width)});
        break;
      }
      default:
        break;
    }
  }
  std::stable_sort(changes.begin(), changes.end(), [](const Change& a, const Change& b) {
    return a.time != b.time ? a.time < b.time : a.order < b.order;
  });

  std::ostringstream out;
  out << "$date reproducible $end\n$version hhls $end\n$timescale 1ps $end\n";
  std::string scope;
  for (const auto& s : signals) {
    if (s.scope != scope) {
      if (!scope.empty()) out << "$upscope $end\n";
      out << "$scope module " << s.scope << " $end\n";
      scope = s.scope;
    }
    out << "$var wire " << s.width << ' ' << s.code << ' ' << s.name << " $end\n";
  }
  if (!scope.empty()) out << "$upscope $end\n";
  out << "$enddefinitions $end\n";

  auto print = [&](const Change& c) {
    const Signal& s = signals[c.signal];
    if (s.width == 1) out << c.value << s.code << '\n';
    else out << 'b' << c.value << ' ' << s.code << '\n';
  };
  std::size_t k = 0;
  while (k < changes.size()) {
    const std::uint64_t t = changes[k].time;
    // Last change of a signal within one timestamp wins.
    std::map<std::size_t, const Change*> last;
    for (; k < changes.size() && changes[k].time == t; ++k) last[changes[k].signal] = &changes[k];
    out << '#' << t << '\n';
    if (t == 0) out << "$dumpvars\n";
    for (const auto& [signal, change] : last) print(*change);
    if (t == 0) out << "$end\n";
  }
  return out.str();
}

}  // namespace hhls
