#include "hhls/estimate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "hhls/error.hpp"
#include "hhls/io.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

std::map<OpType, double> CostTable::area_weights() const {
  std::map<OpType, double> out;
  for (OpType t : kAllOpTypes) out[t] = area_of(t);
  return out;
}

void CostTable::validate() const {
  for (OpType t : kAllOpTypes) {
    if (!(area_of(t) >= 0)) fail(std::string("area of '") + to_string(t) + "' must be non-negative");
    if (latencies[t] < 1) fail(std::string("latency of '") + to_string(t) + "' must be at least 1");
  }
  if (!(overhead >= 0)) fail("overhead must be non-negative");
  if (!(static_fraction >= 0 && static_fraction < 1)) fail("static_fraction must lie in [0, 1)");
  if (fref_hz == 0 || fmax_hz == 0) fail("reference and maximum frequencies must be positive");
  if (!(mw_per_area >= 0)) fail("mw_per_area must be non-negative");
}

CostTable CostTable::from_config(const KeyValueConfig& config) {
  CostTable table;
  for (const auto& [key, value] : config.values()) {
    const std::string at = config.where(key);
    auto number = [&] {
      double v = 0;
      if (!parse_double(value, v)) fail(at + "'" + key + "' expects a number, got '" + value + "'");
      return v;
    };
    auto mhz = [&] {
      std::uint64_t hz = 0;
      if (!parse_mhz(value, hz) || hz == 0)
        fail(at + "'" + key + "' expects a positive MHz value, got '" + value + "'");
      return hz;
    };
    auto op_of = [&](std::string_view name) {
      auto t = parse_op_type(name);
      if (!t) fail(at + "unknown operation type '" + std::string(name) + "'");
      return *t;
    };
    if (key.rfind("area.", 0) == 0) {
      table.area[static_cast<std::size_t>(op_of(key.substr(5)))] = number();
    } else if (key.rfind("latency.", 0) == 0) {
      std::uint64_t v = 0;
      if (!parse_u64(value, v) || v < 1 || v > 1000)
        fail(at + "'" + key + "' expects an integer latency in [1, 1000]");
      table.latencies[op_of(key.substr(8))] = static_cast<int>(v);
    } else if (key == "overhead") {
      table.overhead = number();
    } else if (key == "static_fraction") {
      table.static_fraction = number();
    } else if (key == "fref_mhz") {
      table.fref_hz = mhz();
    } else if (key == "fmax_mhz") {
      table.fmax_hz = mhz();
    } else if (key == "mw_per_area") {
      table.mw_per_area = number();
    }
  }
  try {
    table.validate();
  } catch (const Error& e) {
    fail(config.origin() + ": " + e.what());
  }
  return table;
}

std::vector<std::pair<std::string, std::string>> CostTable::describe() const {
  std::map<std::string, std::string> m;
  for (OpType t : kAllOpTypes) {
    m[std::string("area.") + to_string(t)] = format_shortest(area_of(t));
    m[std::string("latency.") + to_string(t)] = std::to_string(latencies[t]);
  }
  m["overhead"] = format_shortest(overhead);
  m["static_fraction"] = format_shortest(static_fraction);
  m["fref_mhz"] = format_mhz(fref_hz);
  m["fmax_mhz"] = format_mhz(fmax_hz);
  m["mw_per_area"] = format_shortest(mw_per_area);
  return {m.begin(), m.end()};
}

double estimate_area(const ResourceUsage& usage, const CostTable& table) {
  double sum = 0;
  for (const auto& [k, r] : usage) sum += r * table.area_of(k);
  return (1 + table.overhead) * sum;
}

double power_scaling(double freq_hz, double fmax_hz, double static_fraction) {
  return static_fraction + (1 - static_fraction) * freq_hz / fmax_hz;
}

double estimate_power(double area, double freq_hz, const CostTable& table) {
  if (!(freq_hz > 0)) fail("frequency must be positive");
  return table.mw_per_area * area *
         power_scaling(freq_hz, static_cast<double>(table.fref_hz), table.static_fraction);
}

namespace {

Schedule critical_schedule(const Dfg& g, const Latencies& lat) {
  return fds_schedule(g, min_latency(g, lat), lat);
}

LoopSchedule schedule_loop(const Loop& loop, int lambda, const Latencies& lat) {
  LoopSchedule out;
  out.trip = loop.trip;
  if (loop.children.empty()) {
    out.body = fds_schedule(loop.body, lambda, lat);
  } else {
    out.body = critical_schedule(loop.body, lat);
    for (const auto& child : loop.children) out.children.push_back(schedule_loop(child, lambda, lat));
  }
  return out;
}

std::uint64_t loop_cycles(const Loop& loop, const LoopSchedule& s) {
  if (s.trip != loop.trip || s.children.size() != loop.children.size() ||
      s.body.starts.size() != loop.body.size())
    fail("loop schedule does not match the loop nest");
  std::uint64_t body = static_cast<std::uint64_t>(s.body.makespan);
  for (std::size_t i = 0; i < loop.children.size(); ++i) body += loop_cycles(loop.children[i], s.children[i]);
  return loop.trip * body;
}

void merge_usage(ResourceUsage& into, const ResourceUsage& from) {
  for (const auto& [k, r] : from) into[k] = std::max(into[k], r);
}

void loop_usage(ResourceUsage& into, const Loop& loop, const LoopSchedule& s, const Latencies& lat) {
  merge_usage(into, resource_usage(loop.body, s.body, lat));
  for (std::size_t i = 0; i < loop.children.size(); ++i) loop_usage(into, loop.children[i], s.children[i], lat);
}

}  // namespace

NestSchedule schedule_nest(const LoopNest& nest, int lambda, const Latencies& latencies) {
  NestSchedule out;
  // A loop-free graph is itself the kernel the constraint applies to.
  if (nest.loops.empty() && nest.post.empty()) {
    out.pre = fds_schedule(nest.pre, lambda, latencies);
    return out;
  }
  out.pre = critical_schedule(nest.pre, latencies);
  for (const auto& loop : nest.loops) out.loops.push_back(schedule_loop(loop, lambda, latencies));
  out.post = critical_schedule(nest.post, latencies);
  return out;
}

std::uint64_t exec_latency(const LoopNest& nest, const NestSchedule& schedule) {
  if (schedule.loops.size() != nest.loops.size() || schedule.pre.starts.size() != nest.pre.size() ||
      schedule.post.starts.size() != nest.post.size())
    fail("nest schedule does not match the loop nest");
  std::uint64_t total = static_cast<std::uint64_t>(schedule.pre.makespan + schedule.post.makespan);
  for (std::size_t i = 0; i < nest.loops.size(); ++i) total += loop_cycles(nest.loops[i], schedule.loops[i]);
  return total;
}

ResourceUsage nest_usage(const LoopNest& nest, const NestSchedule& schedule,
                         const Latencies& latencies) {
  ResourceUsage out;
  merge_usage(out, resource_usage(nest.pre, schedule.pre, latencies));
  merge_usage(out, resource_usage(nest.post, schedule.post, latencies));
  for (std::size_t i = 0; i < nest.loops.size(); ++i)
    loop_usage(out, nest.loops[i], schedule.loops[i], latencies);
  return out;
}

const char* to_string(AltSource source) {
  return source == AltSource::Modeled ? "modeled" : "measured";
}

MccAlternative model_alternative(const std::string& mcc, const LoopNest& nest, int unroll,
                                 int lambda, const CostTable& table) {
  const NestSchedule s = schedule_nest(nest, lambda, table.latencies);
  MccAlternative alt;
  alt.mcc = mcc;
  alt.source = AltSource::Modeled;
  alt.unroll = unroll;
  alt.lambda = lambda;
  alt.fmax_hz = table.fmax_hz;
  alt.exec_cycles = std::max<std::uint64_t>(1, exec_latency(nest, s));
  alt.area = estimate_area(nest_usage(nest, s, table.latencies), table);
  alt.power_mw = estimate_power(alt.area, static_cast<double>(alt.fmax_hz), table);
  return alt;
}

void validate_alternative(const MccAlternative& row) {
  if (row.mcc.empty()) fail("alternative without an MCC name");
  for (char c : row.mcc)
    if (c == ',' || c == ';' || c == '=' || c == '"' || std::isspace(static_cast<unsigned char>(c)))
      fail("MCC name '" + row.mcc + "' contains a reserved character");
  if (row.exec_cycles < 1) fail("exec latency of " + row.mcc + " must be at least 1 cycle");
  if (row.fmax_hz == 0) fail("maximum frequency of " + row.mcc + " must be positive");
  if (!(row.area >= 0) || !std::isfinite(row.area)) fail("area of " + row.mcc + " must be non-negative");
  if (!(row.power_mw >= 0) || !std::isfinite(row.power_mw))
    fail("power of " + row.mcc + " must be non-negative");
  if (row.unroll < 0) fail("unroll factor of " + row.mcc + " must be non-negative");
  if (row.lambda && *row.lambda < 1) fail("latency constraint of " + row.mcc + " must be positive");
}

std::vector<MccAlternative> parse_alternatives(std::string_view text, const std::string& origin) {
  std::vector<MccAlternative> rows;
  std::set<std::tuple<std::string, int, int>> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string at = origin + ":" + std::to_string(lineno) + ": ";
    if (!header) {
      if (line != kAlternativesHeader)
        fail(at + "expected header '" + std::string(kAlternativesHeader) + "'");
      header = true;
      continue;
    }
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      auto comma = line.find(',', start);
      f.push_back(std::string(trim(std::string_view(line).substr(start, comma - start))));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 8) fail(at + "expected 8 fields, found " + std::to_string(f.size()));
    MccAlternative row;
    row.mcc = f[0];
    if (f[1] == "modeled") row.source = AltSource::Modeled;
    else if (f[1] == "measured") row.source = AltSource::Measured;
    else fail(at + "source must be 'modeled' or 'measured', got '" + f[1] + "'");
    std::uint64_t u = 0;
    if (!parse_u64(f[2], u) || u > 1000000) fail(at + "bad unroll factor '" + f[2] + "'");
    row.unroll = static_cast<int>(u);
    if (!f[3].empty()) {
      if (!parse_u64(f[3], u) || u > 1000000000) fail(at + "bad latency constraint '" + f[3] + "'");
      row.lambda = static_cast<int>(u);
    }
    if (!parse_mhz(f[4], row.fmax_hz)) fail(at + "bad frequency '" + f[4] + "'");
    if (!parse_u64(f[5], row.exec_cycles)) fail(at + "bad exec latency '" + f[5] + "'");
    if (!parse_double(f[6], row.area)) fail(at + "bad area '" + f[6] + "'");
    if (!parse_double(f[7], row.power_mw)) fail(at + "bad power '" + f[7] + "'");
    try {
      validate_alternative(row);
    } catch (const Error& e) {
      fail(at + e.what());
    }
    if (!seen.emplace(row.mcc, row.unroll, row.lambda.value_or(-1)).second)
      fail(at + "duplicate alternative for " + row.mcc + " (unroll " + f[2] + ", lambda " +
           (f[3].empty() ? std::string("none") : f[3]) + ")");
    rows.push_back(std::move(row));
  }
  if (!header) fail(origin + ": missing header line");
  return rows;
}

std::string format_alternatives(const std::vector<MccAlternative>& rows) {
  std::string out = std::string(kAlternativesHeader) + "\n";
  for (const auto& r : rows) {
    out += r.mcc + "," + to_string(r.source) + "," + std::to_string(r.unroll) + "," +
           (r.lambda ? std::to_string(*r.lambda) : "") + "," + format_mhz(r.fmax_hz) + "," +
           std::to_string(r.exec_cycles) + "," + format_shortest(r.area) + "," +
           format_shortest(r.power_mw) + "\n";
  }
  return out;
}

std::vector<MccAlternative> load_alternatives(const std::string& path) {
  return parse_alternatives(read_file(path), path);
}

void save_alternatives(const std::string& path, const std::vector<MccAlternative>& rows) {
  write_file(path, format_alternatives(rows));
}

std::vector<MccAlternative> pareto_filter_alternatives(const std::vector<MccAlternative>& rows) {
  auto dominates = [](const MccAlternative& a, const MccAlternative& b) {
    const bool no_worse = a.power_mw <= b.power_mw && a.area <= b.area && a.exec_cycles <= b.exec_cycles;
    const bool better = a.power_mw < b.power_mw || a.area < b.area || a.exec_cycles < b.exec_cycles;
    return no_worse && better;
  };
  std::vector<MccAlternative> out;
  for (const auto& r : rows) {
    bool dominated = false;
    for (const auto& o : rows)
      if (o.mcc == r.mcc && dominates(o, r)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(r);
  }
  return out;
}

}  // namespace hhls
