#include <algorithm>
#include <filesystem>

#include "hhls/dse.hpp"
#include "hhls/error.hpp"
#include "hhls/io.hpp"
#include "hhls/numfmt.hpp"
#include "json.hpp"

namespace hhls {

namespace {

std::string mhz_text(const Rational& hz) { return format_fixed(hz.to_double() / 1e6, 6); }

std::string config_row(const Evaluator& eval, const ConfigResult& r) {
  return std::to_string(r.id) + "," + eval.space().choices_text(r.choices) + "," + mhz_text(r.f_common) +
         "," + format_shortest(r.area) + "," + (r.feasible ? format_fixed(r.energy_mj, 6) : "") + "," +
         (r.feasible ? "1" : "0") + "\n";
}

std::string describe_config(const Evaluator& eval, const ConfigResult& r) {
  return "config " + std::to_string(r.id) + " [" + eval.space().choices_text(r.choices) + "] area " +
         format_shortest(r.area) + ", energy " + format_fixed(r.energy_mj, 6) + " mJ, f_common " +
         mhz_text(r.f_common) + " MHz";
}

void finish(const Evaluator& eval, ExploreSummary& s) {
  s.configs = eval.space().size();
  if (s.aggregate.min_energy) {
    s.min_energy_unscaled = eval.unscaled_energy(s.aggregate.min_energy->choices);
    if (s.min_energy_unscaled > 0)
      s.scaling_reduction = 1 - s.aggregate.min_energy->energy_mj / s.min_energy_unscaled;
  }
}

}  // namespace

ExploreSummary summarize(const Evaluator& eval, const SearchOptions& options) {
  ExploreSummary s;
  s.aggregate = search(eval, options, &s.stats);
  s.complete = s.stats.pruned == 0;
  finish(eval, s);
  return s;
}

std::string format_summary(const Evaluator& eval, const ExploreSummary& s) {
  const DesignSpace& space = eval.space();
  const Aggregate& a = s.aggregate;
  std::string out = "design space: " + std::to_string(s.configs) + " configurations";
  if (s.complete) out += " (" + std::to_string(a.feasible) + " feasible)";
  else out += " (" + std::to_string(s.stats.pruned) + " skipped by the lower bound)";
  out += "\nmccs:";
  for (std::size_t i = 0; i < space.mccs.size(); ++i)
    out += " " + space.mccs[i] + "(" + std::to_string(space.alternatives[i].size()) + ")";
  out += "\nwindow: " + format_duration(eval.window()) + "\n";
  if (s.complete && a.f_low)
    out += "f_common range: " + mhz_text(*a.f_low) + " .. " + mhz_text(*a.f_high) + " MHz\n";
  out += "pareto front: " + std::to_string(a.front.points().size()) + " points\n";
  if (a.min_area) out += "min-area: " + describe_config(eval, *a.min_area) + "\n";
  if (a.min_energy) {
    out += "min-energy: " + describe_config(eval, *a.min_energy) + "\n";
    out += "min-energy unscaled: " + format_fixed(s.min_energy_unscaled, 6) + " mJ\n";
    out += "frequency-scaling reduction: " + format_fixed(s.scaling_reduction * 100, 2) + "%\n";
  } else {
    out += "no feasible configuration\n";
  }
  return out;
}

std::string render_svg(const Evaluator&, const std::vector<ParetoPoint>& cloud,
                       const std::vector<ParetoPoint>& front) {
  const double W = 720, H = 480, left = 90, right = 20, top = 20, bottom = 60;
  double amin = 0, amax = 1, emin = 0, emax = 1;
  bool any = false;
  for (const auto* set : {&cloud, &front})
    for (const auto& p : *set) {
      if (!any) {
        amin = amax = p.area;
        emin = emax = p.energy;
        any = true;
      }
      amin = std::min(amin, p.area);
      amax = std::max(amax, p.area);
      emin = std::min(emin, p.energy);
      emax = std::max(emax, p.energy);
    }
  auto widen = [](double& lo, double& hi) {
    double pad = (hi - lo) * 0.05;
    if (pad <= 0) pad = std::max(1e-3, std::abs(hi) * 0.05);
    lo -= pad;
    hi += pad;
  };
  widen(amin, amax);
  widen(emin, emax);
  auto x = [&](double a) { return left + (a - amin) / (amax - amin) * (W - left - right); };
  auto y = [&](double e) { return H - bottom - (e - emin) / (emax - emin) * (H - top - bottom); };
  auto f2 = [](double v) { return format_fixed(v, 2); };

  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
                    "viewBox=\"0 0 720 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  out += "<line x1=\"" + f2(left) + "\" y1=\"" + f2(H - bottom) + "\" x2=\"" + f2(W - right) + "\" y2=\"" +
         f2(H - bottom) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + f2(left) + "\" y1=\"" + f2(top) + "\" x2=\"" + f2(left) + "\" y2=\"" +
         f2(H - bottom) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double a = amin + (amax - amin) * i / 4, e = emin + (emax - emin) * i / 4;
    out += "<text x=\"" + f2(x(a)) + "\" y=\"" + f2(H - bottom + 18) + "\" text-anchor=\"middle\">" +
           format_fixed(a, 0) + "</text>\n";
    out += "<text x=\"" + f2(left - 6) + "\" y=\"" + f2(y(e) + 4) + "\" text-anchor=\"end\">" +
           format_fixed(e, 3) + "</text>\n";
  }
  out += "<text x=\"" + f2((left + W - right) / 2) + "\" y=\"" + f2(H - 15) +
         "\" text-anchor=\"middle\">Area (LUT+FF)</text>\n";
  out += "<text x=\"20\" y=\"" + f2((top + H - bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
         f2((top + H - bottom) / 2) + ")\">Energy (mJ)</text>\n";
  for (const auto& p : cloud)
    out += "<circle cx=\"" + f2(x(p.area)) + "\" cy=\"" + f2(y(p.energy)) + "\" r=\"3\" fill=\"#8899aa\"/>\n";
  if (!front.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < front.size(); ++i)
      out += (i ? " " : "") + f2(x(front[i].area)) + "," + f2(y(front[i].energy));
    out += "\"/>\n";
  }
  for (const auto& p : front)
    out += "<circle cx=\"" + f2(x(p.area)) + "\" cy=\"" + f2(y(p.energy)) +
           "\" r=\"4.5\" fill=\"#c0392b\"><title>config " + std::to_string(p.id) + "</title></circle>\n";
  out += "</svg>\n";
  return out;
}

ExploreSummary explore(const Evaluator& eval, const std::string& out_dir, const ExploreOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir))
    fail_io("cannot create output directory " + out_dir + (ec ? ": " + ec.message() : ""));
  const auto path = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };

  ExploreSummary s;
  std::vector<ParetoPoint> cloud;
  const bool plot_all = eval.space().size() <= options.svg_point_cap;
  if (options.write_configs) {
    std::string csv = "config_id,choices,f_common_mhz,area,energy_mj,feasible\n";
    enumerate(eval, [&](const ConfigResult& r) {
      csv += config_row(eval, r);
      ++s.stats.evaluated;
      if (!r.feasible) ++s.stats.infeasible;
      s.aggregate.add(r);
      if (plot_all && r.feasible) cloud.push_back({r.area, r.energy_mj, r.id});
    });
    write_file(path("configs.csv"), csv);
    finish(eval, s);
  } else {
    s = summarize(eval, options.search);
  }
  const auto& front = s.aggregate.front.points();

  std::string pcsv = "config_id,choices,f_common_mhz,area,energy_mj\n";
  nlohmann::ordered_json json = nlohmann::ordered_json::array();
  for (const auto& p : front) {
    const ConfigResult r = eval.evaluate(p.id);
    pcsv += std::to_string(r.id) + "," + eval.space().choices_text(r.choices) + "," + mhz_text(r.f_common) +
            "," + format_shortest(r.area) + "," + format_fixed(r.energy_mj, 6) + "\n";
    nlohmann::ordered_json choices = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.choices.size(); ++i) choices[eval.space().mccs[i]] = r.choices[i];
    json.push_back({{"config_id", r.id},
                    {"area", r.area},
                    {"energy_mj", r.energy_mj},
                    {"f_common_mhz", r.f_common.to_double() / 1e6},
                    {"choices", choices}});
  }
  write_file(path("pareto.csv"), pcsv);
  write_file(path("pareto.json"), json.dump(2) + "\n");
  write_file(path("pareto.svg"), render_svg(eval, plot_all ? cloud : std::vector<ParetoPoint>{}, front));
  write_file(path("summary.txt"), format_summary(eval, s));
  return s;
}

}  // namespace hhls
