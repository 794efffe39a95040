#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hhls/config.hpp"
#include "hhls/estimate.hpp"
#include "hhls/psm.hpp"
#include "hhls/rational.hpp"

namespace hhls {

// Timing context of one MCC: the period of the PSM that invokes it.
struct EnvEntry {
  Rational period;               // seconds
  std::uint64_t invocations = 1;  // per period
  std::uint64_t reserved = 0;     // FSM cycles per invocation
  std::string psm;               // owning PSM; groups MCCs in per-PSM mode
};

struct TimingEnvelope {
  std::map<std::string, EnvEntry> mccs;
  std::optional<Rational> window;  // energy window; default hyperperiod
  double static_fraction = 0.0;
  bool per_psm = false;  // independent frequency per PSM instead of one common

  const EnvEntry& entry(const std::string& mcc) const;
  Rational hyperperiod() const;
  Rational effective_window() const { return window ? *window : hyperperiod(); }
  void validate() const;

  // Keys: window, static_fraction, default_period, per_psm,
  // period.<mcc>, invocations.<mcc>, reserved.<mcc>, psm.<mcc>.
  static TimingEnvelope from_config(const KeyValueConfig& config, const std::vector<std::string>& mccs);

  // One entry per MCC invoked by an instance: its period and number of invoke
  // sites. MCC names must be unique across the system.
  static TimingEnvelope from_system(const PsmSystem& system, const PsmModule& library);

  // Resolved values as (key, text), sorted.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

// f_req = invocations * (L + reserved) / T, in Hz.
Rational required_frequency(const MccAlternative& alt, const EnvEntry& env);

// Alternatives grouped per MCC, MCCs in order of first appearance.
struct DesignSpace {
  std::vector<std::string> mccs;
  std::vector<std::vector<MccAlternative>> alternatives;

  static DesignSpace from_rows(const std::vector<MccAlternative>& rows);
  std::uint64_t size() const;  // throws when the product overflows
  // Mixed-radix decoding, last MCC varying fastest.
  std::vector<int> choices_of(std::uint64_t id) const;
  std::uint64_t id_of(const std::vector<int>& choices) const;
  std::string choices_text(const std::vector<int>& choices) const;  // "MHR=0;SPO2=1"
};

struct ConfigResult {
  std::uint64_t id = 0;
  std::vector<int> choices;
  Rational f_common;  // Hz; the largest group frequency in per-PSM mode
  bool feasible = false;
  std::string reason;  // why infeasible
  double area = 0;
  double energy_mj = 0;  // valid only when feasible
};

// Precomputed per-alternative quantities for fast repeated evaluation.
class Evaluator {
 public:
  Evaluator(const DesignSpace& space, const TimingEnvelope& env);

  const DesignSpace& space() const { return space_; }
  double window_seconds() const { return window_; }
  const Rational& window() const { return window_exact_; }
  ConfigResult evaluate(const std::vector<int>& choices) const;
  ConfigResult evaluate(std::uint64_t id) const;
  // Energy of a configuration with every MCC running at its own f_max.
  double unscaled_energy(const std::vector<int>& choices) const;
  const Rational& required(std::size_t mcc, std::size_t alt) const { return f_req_[mcc][alt]; }

  // Lower bound (area, energy) over every completion of the first `depth`
  // choices; nullopt when the prefix is already infeasible.
  std::optional<std::pair<double, double>> lower_bound(const std::vector<int>& prefix,
                                                       std::size_t depth) const;

 private:
  const DesignSpace& space_;
  Rational window_exact_;
  double window_;
  double static_fraction_;
  std::vector<int> group_;            // per MCC
  int groups_ = 1;
  std::vector<std::size_t> canonical_;  // MCC indices sorted by name
  std::vector<std::vector<Rational>> f_req_;
  std::vector<Rational> min_req_;  // per MCC, over alternatives
  std::vector<double> min_area_;
};

struct ParetoPoint {
  double area = 0;
  double energy = 0;
  std::uint64_t id = 0;
  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

// a strictly dominates b: no worse in both coordinates, better in one.
bool dominates(double a_area, double a_energy, double b_area, double b_energy);

// Incremental non-dominated set (both coordinates minimized, ties kept),
// sorted by area, then energy, then id.
class ParetoFront {
 public:
  void insert(const ParetoPoint& point);
  void merge(const ParetoFront& other);
  bool dominated(double area, double energy) const;
  const std::vector<ParetoPoint>& points() const { return points_; }

 private:
  std::vector<ParetoPoint> points_;
};

std::vector<ParetoPoint> pareto(const std::vector<ParetoPoint>& cloud);
// O(n^2) reference used by tests.
std::vector<ParetoPoint> brute_force_front(const std::vector<ParetoPoint>& cloud);

struct SearchOptions {
  unsigned jobs = 1;
  bool prune = false;
};

struct SearchStats {
  std::uint64_t evaluated = 0;
  std::uint64_t infeasible = 0;
  std::uint64_t pruned = 0;  // configurations skipped by the bound
};

// Running aggregate over evaluated configurations; merge is associative.
struct Aggregate {
  std::uint64_t evaluated = 0;
  std::uint64_t feasible = 0;
  std::optional<ConfigResult> min_area;    // ties: lower energy, then id
  std::optional<ConfigResult> min_energy;  // ties: lower area, then id
  std::optional<Rational> f_low, f_high;   // f_common range over feasible configs
  ParetoFront front;

  void add(const ConfigResult& config);
  void merge(const Aggregate& other);
};

// Evaluates every configuration, or every one the bound cannot exclude, in
// `jobs` parallel chunks. The front does not depend on `jobs` or pruning.
Aggregate search(const Evaluator& eval, const SearchOptions& options = {},
                 SearchStats* stats = nullptr);
std::vector<ParetoPoint> search_front(const Evaluator& eval, const SearchOptions& options = {});

// Deterministic enumeration in id order.
void enumerate(const Evaluator& eval, const std::function<void(const ConfigResult&)>& visit);

struct ExploreSummary {
  std::uint64_t configs = 0;  // size of the design space
  bool complete = true;       // false when the bound skipped configurations
  SearchStats stats;
  Aggregate aggregate;
  double min_energy_unscaled = 0;  // min-energy config with each MCC at its f_max
  double scaling_reduction = 0;    // 1 - scaled / unscaled
};

struct ExploreOptions {
  SearchOptions search;
  bool write_configs = true;  // configs.csv listing every configuration
  std::size_t svg_point_cap = 20000;
};

// Writes configs.csv, pareto.csv, pareto.json, pareto.svg and summary.txt
// into `out_dir` (created if missing).
ExploreSummary explore(const Evaluator& eval, const std::string& out_dir,
                       const ExploreOptions& options = {});

ExploreSummary summarize(const Evaluator& eval, const SearchOptions& options = {});
std::string format_summary(const Evaluator& eval, const ExploreSummary& summary);
std::string render_svg(const Evaluator& eval, const std::vector<ParetoPoint>& cloud,
                       const std::vector<ParetoPoint>& front);

}  // namespace hhls
