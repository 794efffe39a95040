#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hhls/config.hpp"
#include "hhls/dfg.hpp"
#include "hhls/fds.hpp"

namespace hhls {

// Parametric area/power model. Areas are LUT+FF units per functional unit.
struct CostTable {
  std::array<double, kOpTypeCount> area{50, 50, 400, 1200, 30, 40, 20, 60, 60, 25};
  Latencies latencies;
  double overhead = 0.2;         // register/mux share on top of unit area
  double static_fraction = 0.0;  // delta_s in [0, 1)
  std::uint64_t fref_hz = 100'000'000;
  std::uint64_t fmax_hz = 100'000'000;  // assumed f_max of modeled datapaths
  double mw_per_area = 0.1;             // power per area unit at fref

  double area_of(OpType type) const { return area[static_cast<std::size_t>(type)]; }
  std::map<OpType, double> area_weights() const;

  void validate() const;
  // Reads "area.<type>", "latency.<type>", "overhead", "static_fraction",
  // "fref_mhz", "fmax_mhz", "mw_per_area"; other keys are ignored.
  static CostTable from_config(const KeyValueConfig& config);
  // Every resolved value as (key, text), sorted by key.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

double estimate_area(const ResourceUsage& usage, const CostTable& table);

// P(f) = P_ref * (delta_s + (1 - delta_s) * f / f_ref), P_ref = mw_per_area * area.
double estimate_power(double area, double freq_hz, const CostTable& table);

// Fraction of the power at f_max that is drawn at f (same static/dynamic split).
double power_scaling(double freq_hz, double fmax_hz, double static_fraction);

// Schedules of every segment of a loop nest.
struct LoopSchedule {
  std::uint64_t trip = 1;
  Schedule body;
  std::vector<LoopSchedule> children;
};

struct NestSchedule {
  Schedule pre;
  std::vector<LoopSchedule> loops;
  Schedule post;
};

// Innermost loop bodies are scheduled at `lambda` with force-directed
// scheduling; every other segment at its own critical path. A loop-free nest
// is scheduled whole at `lambda`.
NestSchedule schedule_nest(const LoopNest& nest, int lambda, const Latencies& latencies);

// pre + sum(trip * (body + nested loops)) + post, in cycles. Throws if the
// schedule does not match the nest's shape.
std::uint64_t exec_latency(const LoopNest& nest, const NestSchedule& schedule);

// Datapath resources: per-type maximum over all segments (they run in turn).
ResourceUsage nest_usage(const LoopNest& nest, const NestSchedule& schedule,
                         const Latencies& latencies);

enum class AltSource { Modeled, Measured };

const char* to_string(AltSource source);

struct MccAlternative {
  std::string mcc;
  AltSource source = AltSource::Measured;
  int unroll = 0;  // 0 means not unrolled
  std::optional<int> lambda;
  std::uint64_t fmax_hz = 0;
  std::uint64_t exec_cycles = 0;
  double area = 0;
  double power_mw = 0;  // at fmax
  friend bool operator==(const MccAlternative&, const MccAlternative&) = default;
};

// Builds a modeled alternative: schedule the (already unrolled) nest at lambda,
// then apply the cost table.
MccAlternative model_alternative(const std::string& mcc, const LoopNest& nest, int unroll,
                                 int lambda, const CostTable& table);

inline constexpr const char* kAlternativesHeader =
    "mcc,source,unroll,lambda,freq_mhz,exec_cycles,area,power_mw";

std::vector<MccAlternative> parse_alternatives(std::string_view text,
                                               const std::string& origin = "<alternatives>");
std::string format_alternatives(const std::vector<MccAlternative>& rows);
std::vector<MccAlternative> load_alternatives(const std::string& path);
void save_alternatives(const std::string& path, const std::vector<MccAlternative>& rows);

void validate_alternative(const MccAlternative& row);

// Per-MCC non-dominated rows on (power, area, exec latency), all minimized.
// Input order is preserved; identical rows are both kept.
std::vector<MccAlternative> pareto_filter_alternatives(const std::vector<MccAlternative>& rows);

}  // namespace hhls
