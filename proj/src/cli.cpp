#include "hhls/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "hhls/config.hpp"
#include "hhls/dfg.hpp"
#include "hhls/dse.hpp"
#include "hhls/error.hpp"
#include "hhls/estimate.hpp"
#include "hhls/fds.hpp"
#include "hhls/fsm.hpp"
#include "hhls/io.hpp"
#include "hhls/numfmt.hpp"
#include "hhls/psm_text.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace hhls {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1)
    fail_io("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string RunManifest::read(const std::string& path) {
  std::string bytes = read_file(path);
  inputs_.push_back({path, sha256_hex(bytes), bytes.size()});
  return bytes;
}

std::string RunManifest::to_json(const std::string& created) const {
  nlohmann::json j;
  j["tool"] = "hhls";
  j["version"] = kToolVersion;
  j["command"] = command_;
  j["created"] = created;
  j["inputs"] = nlohmann::json::array();
  for (const auto& in : inputs_)
    j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}, {"bytes", in.bytes}});
  j["parameters"] = parameters_;
  j["outputs"] = outputs_;
  return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& dir) const {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    std::uint64_t v = 0;
    if (parse_u64(epoch, v)) now = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  write_file((fs::path(dir) / "manifest.json").string(), to_json(buf));
}

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

std::string extension(const std::string& path) { return fs::path(path).extension().string(); }

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) fail_io("cannot create output directory " + dir);
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Splits "key=value"; the key must be non-empty.
std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& what) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) fail("expected " + what + " as key=value, got '" + text + "'");
  return {std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1)))};
}

// Parses and merges .psm sources, printing diagnostics. Returns false on any
// parse error.
bool load_psm(RunManifest& manifest, const std::vector<std::string>& paths, PsmModule& module,
              std::ostream& err) {
  bool ok = true;
  for (const auto& path : paths) {
    auto parsed = parse_module(manifest.read(path), path);
    for (const auto& d : parsed.diagnostics) err << d.to_string() << "\n";
    if (parsed.ok())
      module.merge(std::move(*parsed.value));
    else
      ok = false;
  }
  return ok;
}

bool report_findings(const ValidationReport& report, std::ostream& err) {
  for (const auto& d : to_diagnostics(report)) err << d.to_string() << "\n";
  return report.ok();
}

bool validate_module(const PsmModule& module, std::ostream& err) {
  bool ok = true;
  for (const auto& c : module.components) ok = report_findings(validate_component(c), err) && ok;
  for (const auto& s : module.systems) ok = report_findings(validate_system(s, module), err) && ok;
  return ok;
}

PsmSystem pick_system(const PsmModule& module, const std::string& system, const std::string& component) {
  if (!system.empty()) {
    const auto* s = module.find_system(system);
    if (!s) fail("no system named " + system);
    return *s;
  }
  if (!component.empty()) {
    const auto* c = module.find_component(component);
    if (!c) fail("no component named " + component);
    return single_instance_system(*c);
  }
  if (module.systems.size() == 1) return module.systems[0];
  if (module.systems.empty() && module.components.size() == 1)
    return single_instance_system(module.components[0]);
  fail("several candidates; select one with --system or --component");
}

Rational parse_horizon(const std::string& text) {
  auto d = parse_duration(text);
  if (!d || *d <= Rational(0)) fail("bad horizon '" + text + "' (expected e.g. \"2 s\")");
  return *d;
}

std::uint64_t parse_freq(const std::string& text) {
  std::uint64_t hz = 0;
  const bool has_unit = std::any_of(text.begin(), text.end(), [](char c) { return std::isalpha(c); });
  if (!(has_unit ? parse_frequency(text, hz) : parse_mhz(text, hz)))
    fail("bad frequency '" + text + "' (MHz, or with a Hz/kHz/MHz/GHz suffix)");
  return hz;
}

std::vector<const Dfg*> innermost_bodies(const std::vector<Loop>& loops) {
  std::vector<const Dfg*> out;
  for (const auto& l : loops) {
    if (l.children.empty()) {
      out.push_back(&l.body);
    } else {
      auto inner = innermost_bodies(l.children);
      out.insert(out.end(), inner.begin(), inner.end());
    }
  }
  return out;
}

// Smallest lambda every innermost body meets; the straight-line graph when
// there are no loops.
int nest_min_latency(const LoopNest& nest, const Latencies& lat) {
  auto bodies = innermost_bodies(nest.loops);
  if (bodies.empty()) return min_latency(nest.pre, lat);
  int lambda = 0;
  for (const auto* b : bodies) lambda = std::max(lambda, min_latency(*b, lat));
  return lambda;
}

// The graph whose latency range drives --points: the straight-line graph, or
// the innermost body with the longest critical path.
const Dfg& lambda_target(const LoopNest& nest, const Latencies& lat) {
  auto bodies = innermost_bodies(nest.loops);
  if (bodies.empty()) return nest.pre;
  const Dfg* best = bodies[0];
  for (const auto* b : bodies)
    if (min_latency(*b, lat) > min_latency(*best, lat)) best = b;
  return *best;
}

void append_segment(std::string& out, const std::string& label, const Dfg& dfg, const Schedule& s,
                    const Latencies& lat) {
  if (dfg.empty()) return;
  out += "segment " + label + "\n" + write_schedule(dfg, s, resource_usage(dfg, s, lat));
}

void append_loops(std::string& out, const std::string& prefix, const std::vector<Loop>& loops,
                  const std::vector<LoopSchedule>& schedules, const Latencies& lat) {
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const std::string label = prefix + "loop" + std::to_string(i);
    append_segment(out, label + " trip " + std::to_string(loops[i].trip), loops[i].body,
                   schedules[i].body, lat);
    append_loops(out, label + ".", loops[i].children, schedules[i].children, lat);
  }
}

// --------------------------------------------------------------------------
// Commands

struct CheckArgs {
  std::vector<std::string> paths;
};

int cmd_check(const CheckArgs& a, Streams io) {
  RunManifest manifest("check");
  bool invalid = false, io_error = false;
  std::vector<std::string> psm;
  for (const auto& path : a.paths) {
    try {
      const auto ext = extension(path);
      if (ext == ".psm") {
        psm.push_back(path);
        continue;
      }
      const std::string text = manifest.read(path);
      if (ext == ".dfg") {
        parse_dfg(text);
      } else if (ext == ".csv") {
        parse_alternatives(text, path);
      } else if (ext == ".stim") {
        parse_stimulus(text);
      } else if (ext == ".env" || ext == ".cfg" || ext == ".conf") {
        KeyValueConfig::parse(text, path);
      } else {
        fail("unknown input type (expected .psm, .dfg, .csv, .stim or .env)");
      }
    } catch (const Error& e) {
      io.err << path << ": " << e.what() << "\n";
      (e.kind() == ErrorKind::Io ? io_error : invalid) = true;
    }
  }
  PsmModule module;
  try {
    if (!load_psm(manifest, psm, module, io.err)) invalid = true;
    else if (!validate_module(module, io.err)) invalid = true;
  } catch (const Error& e) {
    io.err << e.what() << "\n";
    (e.kind() == ErrorKind::Io ? io_error : invalid) = true;
  }
  if (io_error) return kExitIo;
  if (invalid) return kExitInvalid;
  io.out << "ok: " << a.paths.size() << " file(s)\n";
  return kExitOk;
}

struct SimArgs {
  std::vector<std::string> files;
  std::string system, component, stimulus, horizon, out;
  std::vector<std::string> mcc_durations;
};

int cmd_sim(const SimArgs& a, Streams io) {
  RunManifest manifest("sim");
  PsmModule module;
  if (!load_psm(manifest, a.files, module, io.err) || !validate_module(module, io.err)) return kExitInvalid;
  const PsmSystem system = pick_system(module, a.system, a.component);
  const Rational horizon = parse_horizon(a.horizon);
  std::vector<Stimulus> stim;
  if (!a.stimulus.empty()) stim = parse_stimulus(manifest.read(a.stimulus));
  SimOptions options;
  for (const auto& d : a.mcc_durations) {
    auto [name, value] = split_assignment(d, "--mcc-duration");
    auto dur = parse_duration(value);
    if (!dur || *dur < Rational(0)) fail("bad MCC duration '" + value + "'");
    options.mcc_durations[name] = *dur;
    manifest.parameter("mcc_duration." + name, format_duration(*dur));
  }
  manifest.parameter("system", system.name);
  manifest.parameter("horizon", format_duration(horizon));
  const auto trace = simulate(system, module, stim, horizon, options);
  if (a.out.empty()) {
    io.out << trace.to_text();
    return kExitOk;
  }
  make_dir(a.out);
  write_file(in_dir(a.out, "trace.txt"), trace.to_text());
  manifest.output("trace.txt");
  manifest.write(a.out);
  io.out << trace.records.size() << " records written to " << in_dir(a.out, "trace.txt") << "\n";
  return kExitOk;
}

struct TableArgs {
  std::string costs;
  std::vector<std::string> sets;
};

KeyValueConfig load_config(RunManifest& manifest, const std::string& path,
                           const std::vector<std::string>& sets) {
  KeyValueConfig config;
  if (!path.empty()) config = KeyValueConfig::parse(manifest.read(path), path);
  for (const auto& s : sets) {
    auto [k, v] = split_assignment(s, "--set");
    config.set(k, v);
  }
  return config;
}

struct ScheduleArgs {
  std::string dfg, out, mcc;
  int lambda = 0, points = 0, unroll = 0;
  TableArgs table;
};

int cmd_schedule(const ScheduleArgs& a, Streams io) {
  RunManifest manifest("schedule");
  if ((a.lambda > 0) == (a.points > 0)) fail("give exactly one of --lambda or --points");
  LoopNest nest = parse_dfg(manifest.read(a.dfg));
  const CostTable table = CostTable::from_config(load_config(manifest, a.table.costs, a.table.sets));
  if (a.unroll > 1) nest = unroll(nest, a.unroll);
  const std::string mcc = a.mcc.empty() ? fs::path(a.dfg).stem().string() : a.mcc;

  std::vector<int> lambdas;
  if (a.lambda > 0) {
    lambdas = {a.lambda};
  } else {
    lambdas = latency_points(lambda_target(nest, table.latencies), table.latencies, a.points);
  }
  make_dir(a.out);
  std::vector<MccAlternative> rows;
  for (int lambda : lambdas) {
    const NestSchedule s = schedule_nest(nest, lambda, table.latencies);
    std::string text = "mcc " + mcc + "\nexec_cycles " + std::to_string(exec_latency(nest, s)) + "\n";
    append_segment(text, "pre", nest.pre, s.pre, table.latencies);
    append_loops(text, "", nest.loops, s.loops, table.latencies);
    append_segment(text, "post", nest.post, s.post, table.latencies);
    const std::string name = mcc + "_l" + std::to_string(lambda) + ".sched";
    write_file(in_dir(a.out, name), text);
    manifest.output(name);
    rows.push_back(model_alternative(mcc, nest, a.unroll, lambda, table));
    io.out << name << ": lambda " << lambda << ", " << rows.back().exec_cycles << " cycles, area "
           << format_shortest(rows.back().area) << "\n";
  }
  save_alternatives(in_dir(a.out, "alternatives.csv"), rows);
  manifest.output("alternatives.csv");
  manifest.parameter("mcc", mcc);
  manifest.parameter("unroll", std::to_string(a.unroll));
  std::string lambda_list;
  for (int l : lambdas) lambda_list += (lambda_list.empty() ? "" : ",") + std::to_string(l);
  manifest.parameter("lambdas", lambda_list);
  for (const auto& [k, v] : table.describe()) manifest.parameter("cost." + k, v);
  manifest.write(a.out);
  return kExitOk;
}

struct SynthArgs {
  std::vector<std::string> files;
  std::string system, component, out, default_freq, stimulus, horizon;
  std::vector<std::string> freqs, mcc_cycles;
  bool check = false;
};

int cmd_synth(const SynthArgs& a, Streams io) {
  RunManifest manifest("synth");
  PsmModule module;
  if (!load_psm(manifest, a.files, module, io.err) || !validate_module(module, io.err)) return kExitInvalid;
  const PsmSystem system = pick_system(module, a.system, a.component);

  std::map<std::string, std::uint64_t> hz;
  for (const auto& f : a.freqs) {
    auto [inst, value] = split_assignment(f, "--freq");
    hz[inst] = parse_freq(value);
  }
  std::optional<std::uint64_t> default_hz;
  if (!a.default_freq.empty()) default_hz = parse_freq(a.default_freq);
  const SystemIr ir = synthesize_system(system, module, hz, default_hz);

  InterpretOptions options;
  for (const auto& m : a.mcc_cycles) {
    auto [name, value] = split_assignment(m, "--mcc-cycles");
    std::uint64_t cycles = 0;
    if (!parse_u64(value, cycles)) fail("bad cycle count '" + value + "'");
    options.mcc_cycles[name] = cycles;
  }
  // MCCs without an explicit latency take the minimum-latency schedule of
  // their dataflow graph, resolved next to the declaring source.
  for (const auto& c : module.components)
    for (const auto& mcc : c.mccs) {
      if (options.mcc_cycles.count(mcc.name) || !mcc.dfg) continue;
      const fs::path path = fs::path(c.span.file).parent_path() / *mcc.dfg;
      if (!fs::exists(path)) continue;
      const LoopNest nest = parse_dfg(manifest.read(path.string()));
      const Latencies lat;
      options.mcc_cycles[mcc.name] =
          exec_latency(nest, schedule_nest(nest, nest_min_latency(nest, lat), lat));
    }

  make_dir(a.out);
  const std::string stem = ir.name;
  write_file(in_dir(a.out, stem + ".v"), emit_rtl(ir));
  manifest.output(stem + ".v");
  write_file(in_dir(a.out, stem + ".fsm.txt"), fsm_report(ir));
  manifest.output(stem + ".fsm.txt");
  manifest.parameter("system", ir.name);
  for (const auto& inst : ir.instances) manifest.parameter("clock_hz." + inst.name, std::to_string(inst.clock_hz));
  for (const auto& [name, cycles] : options.mcc_cycles)
    manifest.parameter("mcc_cycles." + name, std::to_string(cycles));

  int status = kExitOk;
  if (!a.horizon.empty()) {
    const Rational horizon = parse_horizon(a.horizon);
    std::vector<Stimulus> stim;
    if (!a.stimulus.empty()) stim = parse_stimulus(manifest.read(a.stimulus));
    manifest.parameter("horizon", format_duration(horizon));
    const CycleTrace trace = interpret(ir, stim, horizon, options);
    write_file(in_dir(a.out, stem + ".vcd"), to_vcd(ir, trace));
    manifest.output(stem + ".vcd");
    if (a.check) {
      const auto rep = check_equivalence(system, module, ir, stim, horizon, options);
      for (const auto& m : rep.mismatches) io.err << "mismatch: " << m << "\n";
      io.out << (rep.equivalent ? "equivalent" : "NOT equivalent") << ": " << rep.compared
             << " records, worst deviation " << format_duration(rep.worst_deviation) << "\n";
      if (!rep.equivalent) status = kExitInvalid;
    }
  } else if (a.check) {
    fail("--check needs --horizon");
  }
  manifest.write(a.out);
  io.out << "wrote " << in_dir(a.out, stem + ".v") << "\n";
  return status;
}

struct ExploreArgs {
  std::vector<std::string> alts;
  std::string env, out;
  std::vector<std::string> sets;
  unsigned jobs = 1;
  bool prune = false, filter = false, no_configs = false;
};

struct LoadedSpace {
  DesignSpace space;
  TimingEnvelope env;
};

LoadedSpace load_space(RunManifest& manifest, const ExploreArgs& a) {
  std::vector<MccAlternative> rows;
  for (const auto& path : a.alts) {
    auto part = parse_alternatives(manifest.read(path), path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (a.filter) rows = pareto_filter_alternatives(rows);
  LoadedSpace l{DesignSpace::from_rows(rows), {}};
  l.env = TimingEnvelope::from_config(load_config(manifest, a.env, a.sets), l.space.mccs);
  for (const auto& [k, v] : l.env.describe()) manifest.parameter("env." + k, v);
  manifest.parameter("filter_alternatives", a.filter ? "true" : "false");
  manifest.parameter("prune", a.prune ? "true" : "false");
  return l;
}

int cmd_explore(const ExploreArgs& a, Streams io) {
  RunManifest manifest("explore");
  const LoadedSpace l = load_space(manifest, a);
  const Evaluator eval(l.space, l.env);
  ExploreOptions options;
  options.search = {std::max(1u, a.jobs), a.prune};
  options.write_configs = !a.no_configs;
  make_dir(a.out);
  const ExploreSummary summary = explore(eval, a.out, options);
  for (const char* f : {"configs.csv", "pareto.csv", "pareto.json", "pareto.svg", "summary.txt"})
    if (fs::exists(in_dir(a.out, f))) manifest.output(f);
  manifest.write(a.out);
  io.out << format_summary(eval, summary);
  return summary.aggregate.feasible == 0 ? kExitInfeasible : kExitOk;
}

int cmd_report(const ExploreArgs& a, Streams io) {
  RunManifest manifest("report");
  const LoadedSpace l = load_space(manifest, a);
  const Evaluator eval(l.space, l.env);
  const ExploreSummary summary = summarize(eval, {std::max(1u, a.jobs), a.prune});
  const std::string text = format_summary(eval, summary);
  if (a.out.empty()) {
    io.out << text;
  } else {
    make_dir(a.out);
    write_file(in_dir(a.out, "summary.txt"), text);
    manifest.output("summary.txt");
    manifest.write(a.out);
  }
  return summary.aggregate.feasible == 0 ? kExitInfeasible : kExitOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Invalid: return kExitInvalid;
    case ErrorKind::Infeasible: return kExitInfeasible;
    case ErrorKind::Io: return kExitIo;
  }
  return kExitInvalid;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid high-level synthesis of periodic state machines", "hhls"};
  app.set_version_flag("--version", std::string("hhls ") + kToolVersion);
  app.require_subcommand(1);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Parse and validate .psm, .dfg, .csv, .stim and .env files");
  c_check->add_option("paths", check.paths, "Input files")->required();

  SimArgs sim;
  auto* c_sim = app.add_subcommand("sim", "Run the reference simulator and print the event trace");
  c_sim->add_option("files", sim.files, ".psm sources")->required();
  c_sim->add_option("--system", sim.system, "System to simulate");
  c_sim->add_option("--component", sim.component, "Simulate one component as a single instance");
  c_sim->add_option("--stim", sim.stimulus, "Stimulus file");
  c_sim->add_option("--horizon", sim.horizon, "Simulated time, e.g. \"2 s\"")->required();
  c_sim->add_option("--mcc-duration", sim.mcc_durations, "MCC=duration, repeatable");
  c_sim->add_option("--out", sim.out, "Write trace.txt and manifest.json here instead of stdout");

  ScheduleArgs sched;
  auto* c_sched = app.add_subcommand("schedule", "Force-directed scheduling of a dataflow graph");
  c_sched->add_option("dfg", sched.dfg, ".dfg file")->required();
  c_sched->add_option("--lambda", sched.lambda, "Latency constraint in cycles");
  c_sched->add_option("--points", sched.points, "Number of evenly spaced latency constraints");
  c_sched->add_option("--unroll", sched.unroll, "Unroll innermost loops by this factor");
  c_sched->add_option("--mcc", sched.mcc, "MCC name for the alternative rows (default: file stem)");
  c_sched->add_option("--costs", sched.table.costs, "Cost table config");
  c_sched->add_option("--set", sched.table.sets, "Override a cost table key, key=value");
  c_sched->add_option("--out", sched.out, "Output directory")->required();

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Synthesize FSMs and Verilog for a system");
  c_synth->add_option("files", synth.files, ".psm sources")->required();
  c_synth->add_option("--system", synth.system, "System to synthesize");
  c_synth->add_option("--component", synth.component, "Synthesize one component as a single instance");
  c_synth->add_option("--freq", synth.freqs, "instance=MHz, repeatable");
  c_synth->add_option("--default-freq", synth.default_freq, "Clock for instances without --freq (MHz)");
  c_synth->add_option("--mcc-cycles", synth.mcc_cycles, "MCC=cycles, repeatable");
  c_synth->add_option("--stim", synth.stimulus, "Stimulus for the VCD run");
  c_synth->add_option("--horizon", synth.horizon, "Interpret the FSMs this long and write a VCD");
  c_synth->add_flag("--check", synth.check, "Compare the FSM run against the reference simulator");
  c_synth->add_option("--out", synth.out, "Output directory")->required();

  ExploreArgs expl;
  auto* c_expl = app.add_subcommand("explore", "Enumerate configurations and write Pareto reports");
  ExploreArgs rep;
  auto* c_rep = app.add_subcommand("report", "Print the exploration summary");
  for (auto [cmd, a] : {std::pair{c_expl, &expl}, std::pair{c_rep, &rep}}) {
    cmd->add_option("--alts", a->alts, "Alternative table (csv), repeatable")->required();
    cmd->add_option("--env", a->env, "Timing envelope config");
    cmd->add_option("--set", a->sets, "Override an envelope key, key=value");
    cmd->add_option("--jobs", a->jobs, "Worker threads")->check(CLI::Range(1u, 256u));
    cmd->add_flag("--prune", a->prune, "Skip configurations the bound excludes");
    cmd->add_flag("--filter-alternatives", a->filter, "Drop dominated alternatives per MCC first");
  }
  c_expl->add_option("--out", expl.out, "Output directory")->required();
  c_expl->add_flag("--no-configs", expl.no_configs, "Skip configs.csv");
  c_rep->add_option("--out", rep.out, "Write summary.txt and manifest.json here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInvalid;
  }

  const Streams io{out, err};
  try {
    if (*c_check) return cmd_check(check, io);
    if (*c_sim) return cmd_sim(sim, io);
    if (*c_sched) return cmd_schedule(sched, io);
    if (*c_synth) return cmd_synth(synth, io);
    if (*c_expl) return cmd_explore(expl, io);
    if (*c_rep) return cmd_report(rep, io);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitInvalid;
}

}  // namespace hhls
