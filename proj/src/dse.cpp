#include "hhls/dse.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <thread>

#include "hhls/error.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

const EnvEntry& TimingEnvelope::entry(const std::string& mcc) const {
  auto it = mccs.find(mcc);
  if (it == mccs.end()) fail("timing envelope has no entry for MCC '" + mcc + "'");
  return it->second;
}

Rational TimingEnvelope::hyperperiod() const {
  if (mccs.empty()) fail("timing envelope is empty");
  Rational out = mccs.begin()->second.period;
  for (const auto& [name, e] : mccs) out = lcm(out, e.period);
  return out;
}

void TimingEnvelope::validate() const {
  for (const auto& [name, e] : mccs) {
    if (!e.period.is_positive()) fail("period of MCC '" + name + "' must be positive");
    if (e.invocations < 1) fail("invocations of MCC '" + name + "' must be at least 1");
  }
  if (window && !window->is_positive()) fail("energy window must be positive");
  if (!(static_fraction >= 0 && static_fraction < 1)) fail("static_fraction must lie in [0, 1)");
}

TimingEnvelope TimingEnvelope::from_config(const KeyValueConfig& config,
                                           const std::vector<std::string>& mccs) {
  TimingEnvelope env;
  auto duration = [&](const std::string& key) {
    auto d = parse_duration(*config.get(key));
    if (!d || !d->is_positive())
      fail(config.where(key) + "'" + key + "' expects a positive duration such as '100 ms'");
    return *d;
  };
  auto count = [&](const std::string& key) {
    std::uint64_t v = 0;
    if (!parse_u64(*config.get(key), v)) fail(config.where(key) + "'" + key + "' expects an integer");
    return v;
  };
  std::optional<Rational> default_period;
  for (const auto& [key, value] : config.values()) {
    if (key == "window") {
      env.window = duration(key);
    } else if (key == "default_period") {
      default_period = duration(key);
    } else if (key == "static_fraction") {
      if (!parse_double(value, env.static_fraction))
        fail(config.where(key) + "'static_fraction' expects a number");
    } else if (key == "per_psm") {
      if (value == "true" || value == "1") env.per_psm = true;
      else if (value == "false" || value == "0") env.per_psm = false;
      else fail(config.where(key) + "'per_psm' expects true or false");
    } else {
      for (const char* prefix : {"period.", "invocations.", "reserved.", "psm."}) {
        const std::string p = prefix;
        if (key.rfind(p, 0) == 0 &&
            std::find(mccs.begin(), mccs.end(), key.substr(p.size())) == mccs.end())
          fail(config.where(key) + "'" + key + "' names an MCC without alternatives");
      }
    }
  }
  for (const auto& mcc : mccs) {
    EnvEntry e;
    if (config.contains("period." + mcc)) e.period = duration("period." + mcc);
    else if (default_period) e.period = *default_period;
    else fail(config.origin() + ": no period for MCC '" + mcc + "' (set period." + mcc +
              " or default_period)");
    if (config.contains("invocations." + mcc)) e.invocations = count("invocations." + mcc);
    if (config.contains("reserved." + mcc)) e.reserved = count("reserved." + mcc);
    e.psm = config.get("psm." + mcc).value_or(mcc);
    env.mccs[mcc] = e;
  }
  try {
    env.validate();
  } catch (const Error& err) {
    fail(config.origin() + ": " + err.what());
  }
  return env;
}

TimingEnvelope TimingEnvelope::from_system(const PsmSystem& system, const PsmModule& library) {
  TimingEnvelope env;
  for (const auto& inst : system.instances) {
    const PsmComponent* comp = library.find_component(inst.component);
    if (!comp) fail("instance '" + inst.name + "' uses unknown component '" + inst.component + "'");
    std::map<std::string, std::uint64_t> sites;
    for (const auto& state : comp->states)
      for (const auto& action : state.entry)
        if (auto* inv = std::get_if<InvokeAction>(&action.kind)) ++sites[inv->mcc];
    for (const auto& [mcc, n] : sites) {
      auto [it, fresh] = env.mccs.try_emplace(mcc);
      if (!fresh)
        fail("MCC '" + mcc + "' is invoked by instances '" + it->second.psm + "' and '" + inst.name +
             "'; alternatives need distinct MCC names");
      it->second = {instance_period(inst, *comp), n, 0, inst.name};
    }
  }
  env.validate();
  return env;
}

std::vector<std::pair<std::string, std::string>> TimingEnvelope::describe() const {
  std::map<std::string, std::string> m;
  for (const auto& [name, e] : mccs) {
    m["period." + name] = format_duration(e.period);
    m["invocations." + name] = std::to_string(e.invocations);
    m["reserved." + name] = std::to_string(e.reserved);
    m["psm." + name] = e.psm;
  }
  m["window"] = format_duration(effective_window());
  m["static_fraction"] = format_shortest(static_fraction);
  m["per_psm"] = per_psm ? "true" : "false";
  return {m.begin(), m.end()};
}

Rational required_frequency(const MccAlternative& alt, const EnvEntry& env) {
  const auto cycles = static_cast<std::int64_t>(env.invocations * (alt.exec_cycles + env.reserved));
  return Rational(cycles) / env.period;
}

DesignSpace DesignSpace::from_rows(const std::vector<MccAlternative>& rows) {
  DesignSpace space;
  for (const auto& r : rows) {
    auto it = std::find(space.mccs.begin(), space.mccs.end(), r.mcc);
    if (it == space.mccs.end()) {
      space.mccs.push_back(r.mcc);
      space.alternatives.emplace_back();
      it = space.mccs.end() - 1;
    }
    space.alternatives[it - space.mccs.begin()].push_back(r);
  }
  if (space.mccs.empty()) fail("no MCC alternatives to explore");
  return space;
}

std::uint64_t DesignSpace::size() const {
  std::uint64_t n = 1;
  for (const auto& alts : alternatives)
    if (__builtin_mul_overflow(n, alts.size(), &n)) fail("design space size overflows 64 bits");
  return n;
}

std::vector<int> DesignSpace::choices_of(std::uint64_t id) const {
  std::vector<int> out(mccs.size());
  for (std::size_t i = mccs.size(); i-- > 0;) {
    out[i] = static_cast<int>(id % alternatives[i].size());
    id /= alternatives[i].size();
  }
  return out;
}

std::uint64_t DesignSpace::id_of(const std::vector<int>& choices) const {
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < mccs.size(); ++i) id = id * alternatives[i].size() + choices[i];
  return id;
}

std::string DesignSpace::choices_text(const std::vector<int>& choices) const {
  std::string out;
  for (std::size_t i = 0; i < mccs.size(); ++i) {
    if (i) out += ";";
    out += mccs[i] + "=" + std::to_string(choices[i]);
  }
  return out;
}

Evaluator::Evaluator(const DesignSpace& space, const TimingEnvelope& env)
    : space_(space), static_fraction_(env.static_fraction) {
  env.validate();
  window_exact_ = env.effective_window();
  window_ = window_exact_.to_double();
  const std::size_t n = space.mccs.size();
  std::map<std::string, int> group_ids;
  for (std::size_t i = 0; i < n; ++i) {
    const EnvEntry& e = env.entry(space.mccs[i]);
    if (space.alternatives[i].empty()) fail("MCC '" + space.mccs[i] + "' has no alternatives");
    const std::string key = env.per_psm ? e.psm : std::string();
    auto [it, fresh] = group_ids.try_emplace(key, static_cast<int>(group_ids.size()));
    group_.push_back(it->second);
    f_req_.emplace_back();
    for (const auto& alt : space.alternatives[i]) f_req_.back().push_back(required_frequency(alt, e));
    min_req_.push_back(*std::min_element(f_req_.back().begin(), f_req_.back().end()));
    double a = std::numeric_limits<double>::infinity();
    for (const auto& alt : space.alternatives[i]) a = std::min(a, alt.area);
    min_area_.push_back(a);
  }
  groups_ = static_cast<int>(group_ids.size());
  canonical_.resize(n);
  std::iota(canonical_.begin(), canonical_.end(), 0);
  std::sort(canonical_.begin(), canonical_.end(),
            [&](std::size_t a, std::size_t b) { return space.mccs[a] < space.mccs[b]; });
}

ConfigResult Evaluator::evaluate(const std::vector<int>& choices) const {
  const std::size_t n = space_.mccs.size();
  ConfigResult out;
  out.id = space_.id_of(choices);
  out.choices = choices;
  std::vector<Rational> f(groups_, Rational(0));
  for (std::size_t i = 0; i < n; ++i) f[group_[i]] = std::max(f[group_[i]], f_req_[i][choices[i]]);
  out.f_common = *std::max_element(f.begin(), f.end());
  out.feasible = true;
  for (std::size_t i : canonical_) {
    const MccAlternative& alt = space_.alternatives[i][choices[i]];
    out.area += alt.area;
    if (out.feasible && f[group_[i]] > Rational(static_cast<std::int64_t>(alt.fmax_hz))) {
      out.feasible = false;
      out.reason = space_.mccs[i] + " alternative " + std::to_string(choices[i]) + " would need " +
                   format_fixed(f[group_[i]].to_double() / 1e6, 6) + " MHz, above its f_max " +
                   format_mhz(alt.fmax_hz) + " MHz";
    }
  }
  if (out.feasible) {
    double e = 0;
    for (std::size_t i : canonical_) {
      const MccAlternative& alt = space_.alternatives[i][choices[i]];
      e += alt.power_mw *
           power_scaling(f[group_[i]].to_double(), static_cast<double>(alt.fmax_hz), static_fraction_);
    }
    out.energy_mj = e * window_;
  }
  return out;
}

ConfigResult Evaluator::evaluate(std::uint64_t id) const { return evaluate(space_.choices_of(id)); }

double Evaluator::unscaled_energy(const std::vector<int>& choices) const {
  double e = 0;
  for (std::size_t i : canonical_) e += space_.alternatives[i][choices[i]].power_mw;
  return e * window_;
}

std::optional<std::pair<double, double>> Evaluator::lower_bound(const std::vector<int>& prefix,
                                                                std::size_t depth) const {
  const std::size_t n = space_.mccs.size();
  std::vector<Rational> f(groups_, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    f[group_[i]] = std::max(f[group_[i]], i < depth ? f_req_[i][prefix[i]] : min_req_[i]);
  double area = 0, energy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fg = f[group_[i]].to_double();
    if (i < depth) {
      const MccAlternative& alt = space_.alternatives[i][prefix[i]];
      if (f[group_[i]] > Rational(static_cast<std::int64_t>(alt.fmax_hz))) return std::nullopt;
      area += alt.area;
      energy += alt.power_mw * power_scaling(fg, static_cast<double>(alt.fmax_hz), static_fraction_);
    } else {
      area += min_area_[i];
      double best = std::numeric_limits<double>::infinity();
      for (const auto& alt : space_.alternatives[i])
        best = std::min(best, alt.power_mw *
                                  power_scaling(fg, static_cast<double>(alt.fmax_hz), static_fraction_));
      energy += best;
    }
  }
  return std::make_pair(area, energy * window_ * (1 - 1e-12));
}

bool dominates(double a_area, double a_energy, double b_area, double b_energy) {
  return a_area <= b_area && a_energy <= b_energy && (a_area < b_area || a_energy < b_energy);
}

namespace {

bool point_less(const ParetoPoint& a, const ParetoPoint& b) {
  if (a.area != b.area) return a.area < b.area;
  if (a.energy != b.energy) return a.energy < b.energy;
  return a.id < b.id;
}

}  // namespace

bool ParetoFront::dominated(double area, double energy) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), area,
                             [](double a, const ParetoPoint& p) { return a < p.area; });
  if (it == points_.begin()) return false;
  const ParetoPoint& p = *(it - 1);
  return dominates(p.area, p.energy, area, energy);
}

void ParetoFront::insert(const ParetoPoint& q) {
  if (dominated(q.area, q.energy)) return;
  auto k = std::lower_bound(points_.begin(), points_.end(), q.area,
                            [](const ParetoPoint& p, double a) { return p.area < a; });
  while (k != points_.end() && k->area == q.area && k->energy == q.energy) ++k;
  auto m = k;
  while (m != points_.end() && m->energy >= q.energy) ++m;
  k = points_.erase(k, m);
  points_.insert(std::upper_bound(points_.begin(), points_.end(), q, point_less), q);
}

void ParetoFront::merge(const ParetoFront& other) {
  for (const auto& p : other.points_) insert(p);
}

std::vector<ParetoPoint> pareto(const std::vector<ParetoPoint>& cloud) {
  ParetoFront front;
  for (const auto& p : cloud) front.insert(p);
  return front.points();
}

std::vector<ParetoPoint> brute_force_front(const std::vector<ParetoPoint>& cloud) {
  std::vector<ParetoPoint> out;
  for (const auto& q : cloud) {
    bool dominated = false;
    for (const auto& p : cloud)
      if (dominates(p.area, p.energy, q.area, q.energy)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), point_less);
  return out;
}

void Aggregate::add(const ConfigResult& c) {
  ++evaluated;
  if (!c.feasible) return;
  ++feasible;
  auto area_key = [](const ConfigResult& r) { return std::make_tuple(r.area, r.energy_mj, r.id); };
  auto energy_key = [](const ConfigResult& r) { return std::make_tuple(r.energy_mj, r.area, r.id); };
  if (!min_area || area_key(c) < area_key(*min_area)) min_area = c;
  if (!min_energy || energy_key(c) < energy_key(*min_energy)) min_energy = c;
  if (!f_low || c.f_common < *f_low) f_low = c.f_common;
  if (!f_high || c.f_common > *f_high) f_high = c.f_common;
  front.insert({c.area, c.energy_mj, c.id});
}

void Aggregate::merge(const Aggregate& o) {
  evaluated += o.evaluated;
  feasible += o.feasible;
  auto area_key = [](const ConfigResult& r) { return std::make_tuple(r.area, r.energy_mj, r.id); };
  auto energy_key = [](const ConfigResult& r) { return std::make_tuple(r.energy_mj, r.area, r.id); };
  if (o.min_area && (!min_area || area_key(*o.min_area) < area_key(*min_area))) min_area = o.min_area;
  if (o.min_energy && (!min_energy || energy_key(*o.min_energy) < energy_key(*min_energy)))
    min_energy = o.min_energy;
  if (o.f_low && (!f_low || *o.f_low < *f_low)) f_low = o.f_low;
  if (o.f_high && (!f_high || *o.f_high > *f_high)) f_high = o.f_high;
  front.merge(o.front);
}

namespace {

void scan_range(const Evaluator& eval, std::uint64_t lo, std::uint64_t hi, Aggregate& agg,
                SearchStats& stats) {
  if (lo >= hi) return;
  const DesignSpace& space = eval.space();
  std::vector<int> choices = space.choices_of(lo);
  for (std::uint64_t id = lo; id < hi; ++id) {
    ConfigResult r = eval.evaluate(choices);
    ++stats.evaluated;
    if (!r.feasible) ++stats.infeasible;
    agg.add(r);
    for (std::size_t i = choices.size(); i-- > 0;) {
      if (++choices[i] < static_cast<int>(space.alternatives[i].size())) break;
      choices[i] = 0;
    }
  }
}

struct PrunedSearch {
  const Evaluator& eval;
  Aggregate& agg;
  SearchStats& stats;
  std::vector<std::uint64_t> below;  // configurations under a node at each depth

  void run(std::vector<int>& prefix, std::size_t depth) {
    const DesignSpace& space = eval.space();
    if (depth == prefix.size()) {
      ConfigResult r = eval.evaluate(prefix);
      ++stats.evaluated;
      if (!r.feasible) ++stats.infeasible;
      agg.add(r);
      return;
    }
    if (depth > 0) {
      auto bound = eval.lower_bound(prefix, depth);
      if (!bound) {
        stats.infeasible += below[depth];
        agg.evaluated += below[depth];
        return;
      }
      if (agg.front.dominated(bound->first, bound->second)) {
        stats.pruned += below[depth];
        return;
      }
    }
    for (int c = 0; c < static_cast<int>(space.alternatives[depth].size()); ++c) {
      prefix[depth] = c;
      run(prefix, depth + 1);
    }
  }
};

}  // namespace

Aggregate search(const Evaluator& eval, const SearchOptions& options, SearchStats* stats_out) {
  const DesignSpace& space = eval.space();
  const std::uint64_t total = space.size();
  const unsigned jobs = std::max(1u, options.jobs);
  std::vector<Aggregate> parts(jobs);
  std::vector<SearchStats> part_stats(jobs);
  auto worker = [&](unsigned j) {
    if (!options.prune) {
      const std::uint64_t lo = total / jobs * j + std::min<std::uint64_t>(j, total % jobs);
      const std::uint64_t hi = lo + total / jobs + (j < total % jobs ? 1 : 0);
      scan_range(eval, lo, hi, parts[j], part_stats[j]);
      return;
    }
    PrunedSearch s{eval, parts[j], part_stats[j], {}};
    const std::size_t n = space.mccs.size();
    // below[d]: completions once the first d choices are fixed.
    s.below.assign(n + 1, 1);
    for (std::size_t d = n; d-- > 0;) s.below[d] = s.below[d + 1] * space.alternatives[d].size();
    std::vector<int> prefix(n, 0);
    for (int c = static_cast<int>(j); c < static_cast<int>(space.alternatives[0].size());
         c += static_cast<int>(jobs)) {
      prefix[0] = c;
      s.run(prefix, 1);
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker, j);
    for (auto& t : threads) t.join();
  }
  Aggregate out;
  SearchStats stats;
  for (unsigned j = 0; j < jobs; ++j) {
    out.merge(parts[j]);
    stats.evaluated += part_stats[j].evaluated;
    stats.infeasible += part_stats[j].infeasible;
    stats.pruned += part_stats[j].pruned;
  }
  if (stats_out) *stats_out = stats;
  return out;
}

std::vector<ParetoPoint> search_front(const Evaluator& eval, const SearchOptions& options) {
  return search(eval, options).front.points();
}

void enumerate(const Evaluator& eval, const std::function<void(const ConfigResult&)>& visit) {
  const DesignSpace& space = eval.space();
  const std::uint64_t total = space.size();
  std::vector<int> choices(space.mccs.size(), 0);
  for (std::uint64_t id = 0; id < total; ++id) {
    visit(eval.evaluate(choices));
    for (std::size_t i = choices.size(); i-- > 0;) {
      if (++choices[i] < static_cast<int>(space.alternatives[i].size())) break;
      choices[i] = 0;
    }
  }
}

}  // namespace hhls
