// Copyright 2026 The holab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end experiments: the spiral counterexample, the equivalence sweep
// and the lemma battery, with report emission.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/diskcells.hpp"
#include "holab/growth.hpp"
#include "holab/hardy.hpp"
#include "holab/hypmetric.hpp"
#include "holab/intrinsic.hpp"
#include "holab/maps.hpp"
#include "holab/modulus.hpp"
#include "holab/spiral_map.hpp"

namespace holab {

enum class CheckStatus { kPass, kFail, kInconclusive };

inline std::string statusName(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline CheckStatus parseStatus(const std::string& s) {
  if (s == "pass") return CheckStatus::kPass;
  if (s == "fail") return CheckStatus::kFail;
  if (s == "inconclusive") return CheckStatus::kInconclusive;
  throw FormatError("unknown check status: " + s);
}

namespace report_detail {
inline nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }
inline double number(const nlohmann::json& j, double missing) { return j.is_null() ? missing : j.get<double>(); }
}  // namespace report_detail

// One verdict: measured against the closed band [lo, hi].
struct Check {
  std::string name;
  double measured = NAN;
  double lo = -INFINITY;
  double hi = INFINITY;
  CheckStatus status = CheckStatus::kInconclusive;
  std::string note;

  std::string target() const {
    std::ostringstream os;
    os.precision(6);
    os << '[' << lo << ", " << hi << ']';
    return os.str();
  }

  nlohmann::json toJson() const {
    using report_detail::number;
    return {{"name", name}, {"measured", number(measured)}, {"lo", number(lo)}, {"hi", number(hi)},
            {"status", statusName(status)}, {"note", note}};
  }

  static Check fromJson(const nlohmann::json& j) {
    using report_detail::number;
    Check c;
    c.name = j.at("name").get<std::string>();
    c.measured = number(j.at("measured"), NAN);
    c.lo = number(j.at("lo"), -INFINITY);
    c.hi = number(j.at("hi"), INFINITY);
    c.status = parseStatus(j.at("status").get<std::string>());
    c.note = j.value("note", "");
    return c;
  }
};

inline Check bandCheck(std::string name, double measured, double lo, double hi, std::string note = "") {
  Check c{std::move(name), measured, lo, hi, CheckStatus::kInconclusive, std::move(note)};
  if (!std::isnan(measured))
    c.status = (measured >= lo && measured <= hi) ? CheckStatus::kPass : CheckStatus::kFail;
  return c;
}

inline Check inconclusiveCheck(std::string name, std::string note, double measured = NAN) {
  return {std::move(name), measured, -INFINITY, INFINITY, CheckStatus::kInconclusive, std::move(note)};
}

inline nlohmann::json environmentMetadata() {
  return {{"library", "holab"},
          {"compiler", __VERSION__},
          {"cplusplus", static_cast<long>(__cplusplus)},
#ifdef NDEBUG
          {"build", "release"},
#else
          {"build", "debug"},
#endif
          {"threads", 1}};
}

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::vector<Check> checks;
  nlohmann::json data = nlohmann::json::object();
  nlohmann::json environment = environmentMetadata();
  std::uint64_t seed = 0;

  void add(Check c) { checks.push_back(std::move(c)); }

  std::size_t count(CheckStatus s) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; }));
  }

  // 0 when every check passes, 1 on any failure, 2 when only inconclusive checks remain.
  int exitCode() const {
    if (count(CheckStatus::kFail)) return 1;
    if (count(CheckStatus::kInconclusive)) return 2;
    return 0;
  }

  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }

  nlohmann::json toJson() const {
    nlohmann::json j{{"experiment", experiment}, {"config", config},   {"data", data},
                     {"environment", environment}, {"seed", seed}, {"checks", nlohmann::json::array()}};
    for (const auto& c : checks) j["checks"].push_back(c.toJson());
    j["summary"] = {{"pass", count(CheckStatus::kPass)},
                    {"fail", count(CheckStatus::kFail)},
                    {"inconclusive", count(CheckStatus::kInconclusive)},
                    {"exit_code", exitCode()}};
    return j;
  }

  static ExperimentReport fromJson(const nlohmann::json& j) {
    ExperimentReport r;
    try {
      r.experiment = j.at("experiment").get<std::string>();
      r.config = j.at("config");
      r.data = j.at("data");
      r.environment = j.at("environment");
      r.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& c : j.at("checks")) r.checks.push_back(Check::fromJson(c));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed report: ") + e.what());
    }
    return r;
  }

  std::string toCsv() const {
    std::ostringstream os;
    os.precision(17);
    os << "check,measured,target,verdict\n";
    for (const auto& c : checks) {
      std::string target = c.target();
      os << c.name << ',' << c.measured << ",\"" << target << "\"," << statusName(c.status) << '\n';
    }
    return os.str();
  }
};

inline void emitReport(const ExperimentReport& r, const std::string& format, const std::string& path) {
  if (format == "json") {
    writeText(path, r.toJson().dump(2) + "\n");
  } else if (format == "csv") {
    writeText(path, r.toCsv());
  } else {
    throw ParameterError("report format must be json or csv");
  }
}

struct ExponentFit {
  double exponent = NAN;
  double intercept = NAN;
  double residual = NAN;  // RMS of log residuals

  nlohmann::json toJson() const {
    using report_detail::number;
    return {{"exponent", number(exponent)}, {"intercept", number(intercept)}, {"residual", number(residual)}};
  }
};

// Least-squares slope of log y against log x.
inline ExponentFit fitExponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParameterError("fit needs paired data");
  if (x.size() < 4) throw ParameterError("fit needs at least four pairs");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw DomainError("fit data must be positive");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  ExponentFit f;
  f.exponent = leastSquaresSlope(lx, ly, &f.intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (f.intercept + f.exponent * lx[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / lx.size());
  return f;
}

// ---------------------------------------------------------------------------
// Spiral counterexample

struct SpiralExperimentConfig {
  double alpha = 0.0;
  int loops = 20;
  int samples_per_loop = 128;
  int j_min = 3;
  double qh_spacing = 0.25;   // lattice spacing over the narrowest channel width
  std::vector<double> depths; // probe depths log 1/(1-r); empty picks a geometric grid
  int probe_circles = 12;
  std::vector<double> deltas{1.0, 0.5, 0.25, 0.125};
  bool skip_map = false;
  std::uint64_t seed = 0;

  nlohmann::json toJson() const {
    return {{"alpha", alpha},   {"loops", loops},       {"samples_per_loop", samples_per_loop},
            {"j_min", j_min},   {"qh_spacing", qh_spacing}, {"depths", depths},
            {"probe_circles", probe_circles}, {"deltas", deltas}, {"skip_map", skip_map}, {"seed", seed}};
  }

  static SpiralExperimentConfig fromJson(const nlohmann::json& j) {
    SpiralExperimentConfig c;
    c.alpha = j.value("alpha", c.alpha);
    c.loops = j.value("loops", c.loops);
    c.samples_per_loop = j.value("samples_per_loop", c.samples_per_loop);
    c.j_min = j.value("j_min", c.j_min);
    c.qh_spacing = j.value("qh_spacing", c.qh_spacing);
    c.depths = j.value("depths", c.depths);
    c.probe_circles = j.value("probe_circles", c.probe_circles);
    c.deltas = j.value("deltas", c.deltas);
    c.skip_map = j.value("skip_map", c.skip_map);
    c.seed = j.value("seed", c.seed);
    return c;
  }
};

struct SpiralRow {
  int j = 0;
  double center_abs = NAN;  // |c_j|
  double intrinsic = NAN;   // d_I(base, c_j)
  double qh = NAN;          // k(base, c_j)
  double depth = NAN;       // log 1/(1 - |z_j|)
  double gh = NAN;

  nlohmann::json toJson() const {
    using report_detail::number;
    return {{"j", j}, {"center_abs", number(center_abs)}, {"intrinsic", number(intrinsic)}, {"qh", number(qh)},
            {"depth", number(depth)}, {"gh", number(gh)}};
  }
};

struct SpiralReport {
  SpiralExperimentConfig config;
  std::vector<SpiralRow> rows;
  ExponentFit e_euclid, e_intr, e_qh;       // domain side, against j
  ExponentFit e_depth;                       // log 1/(1-|z_j|) against j
  ExponentFit e_seq_max, e_seq_intr;         // |c_j|, d_I against log 1/(1-|z_j|)
  ExponentFit e_grid_max, e_grid_intr;       // M, M_I against log 1/(1-r) on the grid
  std::vector<double> depths, max_moduli, intrinsic_max_moduli;
  std::shared_ptr<HardyProbeResult> euclid_probe, intrinsic_probe;
  ExperimentReport report;

  nlohmann::json toJson() const { return report.toJson(); }
};

struct Band {
  double lo, hi;
};

// Exponent bands: the alpha = 0 and alpha = 1 acceptance bands, else 15% of the target.
inline Band spiralExponentBand(double target, double alpha) {
  if (alpha == 0.0) return target == 1.0 ? Band{0.85, 1.15} : Band{target - 0.2, target + 0.2};
  if (alpha == 1.0) return {target - 0.3, target + 0.3};
  return {0.85 * target, 1.15 * target};
}

inline std::vector<double> spiralProbeDepths(const SpiralDomain& dom, int n) {
  if (n < 3) throw ParameterError("need at least three probe circles");
  const double s_max = dom.strip_length - std::log(4.0) - 5.0;
  if (!(s_max > 1.0)) throw ParameterError("spiral channel too short for probing");
  const double s_lo = std::min(50.0, s_max / 8);
  std::vector<double> d;
  for (int i = 0; i < n; ++i) d.push_back(s_lo * std::pow(s_max / s_lo, static_cast<double>(i) / (n - 1)));
  return d;
}

namespace experiment_detail {

inline Check fitCheck(const std::string& name, const ExponentFit& f, double target, Band b) {
  auto c = bandCheck(name, f.exponent, b.lo, b.hi);
  std::ostringstream os;
  os << "target " << target << ", rms log residual " << f.residual;
  c.note = os.str();
  return c;
}

inline CheckStatus verdictStatus(Verdict got, Verdict want) {
  if (got == Verdict::kInconclusive) return CheckStatus::kInconclusive;
  return got == want ? CheckStatus::kPass : CheckStatus::kFail;
}

}  // namespace experiment_detail

inline SpiralReport runSpiralExperiment(const SpiralExperimentConfig& cfg) {
  using experiment_detail::fitCheck;
  if (cfg.alpha < 0) throw ParameterError("alpha must be nonnegative");
  if (cfg.loops < cfg.j_min + 4) throw ParameterError("too few loops for exponent fits");
  SpiralReport out;
  out.config = cfg;
  auto& rep = out.report;
  rep.experiment = "spiral";
  rep.config = cfg.toJson();
  rep.seed = cfg.seed;
  const double a = cfg.alpha;

  SpiralSpec spec;
  spec.alpha = a;
  spec.loops = cfg.loops;
  spec.samples_per_loop = cfg.samples_per_loop;
  auto dom = std::make_shared<const SpiralDomain>(buildSpiralDomain(spec));
  const Complex base = dom->polygon.basepoint();
  auto vs = std::make_shared<const VisibilityStructure>(dom->polygon);

  // Domain stage: no conformal map involved.
  bool domain_ok = true;
  try {
    IntrinsicField from_base(vs, base);
    const auto graph = QhGraph::build(dom->polygon, cfg.qh_spacing * dom->minChannelWidth());
    const auto qh = graph.distancesFrom(base);
    std::vector<double> js, cs, ds, ks;
    for (int j = cfg.j_min; j <= cfg.loops - 1; ++j) {
      const Complex c = dom->loop_centers[j - 1];
      SpiralRow row;
      row.j = j;
      row.center_abs = std::abs(c);
      row.intrinsic = from_base.at(c);
      row.qh = qh.at(c);
      out.rows.push_back(row);
      js.push_back(j);
      cs.push_back(row.center_abs);
      ds.push_back(row.intrinsic);
      ks.push_back(row.qh);
    }
    out.e_euclid = fitExponent(js, cs);
    out.e_intr = fitExponent(js, ds);
    out.e_qh = fitExponent(js, ks);
    rep.add(fitCheck("spiral.exponent.euclid", out.e_euclid, 1 + a, spiralExponentBand(1 + a, a)));
    rep.add(fitCheck("spiral.exponent.intrinsic", out.e_intr, 2 + a, spiralExponentBand(2 + a, a)));
    rep.add(fitCheck("spiral.exponent.qh", out.e_qh, 2, spiralExponentBand(2, a)));
  } catch (const Error& e) {
    domain_ok = false;
    for (const char* n : {"spiral.exponent.euclid", "spiral.exponent.intrinsic", "spiral.exponent.qh"})
      rep.add(inconclusiveCheck(n, std::string("domain stage failed: ") + e.what()));
  }

  const std::vector<std::string> map_checks{"spiral.exponent.depth",     "spiral.max_modulus.euclid",
                                            "spiral.max_modulus.intrinsic", "spiral.membership.euclid",
                                            "spiral.membership.intrinsic", "spiral.lower_bound"};
  auto skip_map = [&](const std::string& why) {
    for (const auto& n : map_checks) rep.add(inconclusiveCheck(n, why));
  };
  if (cfg.skip_map) {
    skip_map("map stage skipped");
  } else if (!domain_ok) {
    skip_map("map stage skipped after domain failure");
  } else {
    try {
      auto f = std::make_shared<const SpiralMap>(dom);
      IntrinsicField from_origin(vs, f->eval(0.0));
      std::vector<double> js, zs, cs, ds;
      for (auto& row : out.rows) {
        const DiskPoint z = f->preimageAt(dom->loop_centers[row.j - 1]);
        row.depth = z.s;
        row.gh = ghRatio(*f, from_origin, z);
        js.push_back(row.j);
        zs.push_back(row.depth);
        cs.push_back(std::abs(f->valueAt(z)));
        ds.push_back(from_origin.at(f->valueAt(z)));
      }
      out.e_depth = fitExponent(js, zs);
      out.e_seq_max = fitExponent(zs, cs);
      out.e_seq_intr = fitExponent(zs, ds);
      rep.add(fitCheck("spiral.exponent.depth", out.e_depth, 2, {1.7, 2.3}));

      out.depths = cfg.depths.empty() ? spiralProbeDepths(*dom, cfg.probe_circles) : cfg.depths;
      const auto psi = GrowthFunction::expAlpha(a);
      ModulusEvaluator me(f, Metric::kEuclidean), mi(f, Metric::kIntrinsic, vs);
      out.euclid_probe = std::make_shared<HardyProbeResult>(membershipProbe(me, psi, cfg.deltas, out.depths));
      out.intrinsic_probe = std::make_shared<HardyProbeResult>(membershipProbe(mi, psi, cfg.deltas, out.depths));
      out.max_moduli = out.euclid_probe->max_moduli;
      out.intrinsic_max_moduli = out.intrinsic_probe->max_moduli;
      out.e_grid_max = fitExponent(out.depths, out.max_moduli);
      out.e_grid_intr = fitExponent(out.depths, out.intrinsic_max_moduli);
      const double tm = (1 + a) / 2, ti = (2 + a) / 2;
      rep.add(fitCheck("spiral.max_modulus.euclid", out.e_grid_max, tm, {0.7 * tm, 1.3 * tm}));
      rep.add(fitCheck("spiral.max_modulus.intrinsic", out.e_grid_intr, ti, {0.85 * ti, 1.15 * ti}));

      const Verdict ve = out.euclid_probe->verdict, vi = out.intrinsic_probe->verdict;
      rep.add({"spiral.membership.euclid", ve == Verdict::kBounded ? 1.0 : 0.0, 1, 1,
               experiment_detail::verdictStatus(ve, Verdict::kBounded), verdictName(ve)});
      // Smallest over delta of the largest log10((1 - r) psi(delta M_I)) on the grid.
      double worst = INFINITY;
      for (const auto& d : out.intrinsic_probe->deltas)
        worst = std::min(worst, *std::max_element(d.log_lower_bound.begin(), d.log_lower_bound.end()) / std::log(10.0));
      auto lb = bandCheck("spiral.lower_bound", worst, 6.0, INFINITY, "log10 of (1-r) psi(delta M_I), worst delta");
      if (lb.status == CheckStatus::kFail) {
        lb.status = CheckStatus::kInconclusive;
        lb.note += "; threshold not reached inside the truncated channel";
      }
      Check mi_check{"spiral.membership.intrinsic", vi == Verdict::kDiverging ? 1.0 : 0.0, 1, 1,
                     experiment_detail::verdictStatus(vi, Verdict::kDiverging), verdictName(vi)};
      if (mi_check.status == CheckStatus::kFail && lb.status == CheckStatus::kInconclusive) {
        mi_check.status = CheckStatus::kInconclusive;
        mi_check.note += "; divergence onset lies beyond the truncated channel";
      }
      rep.add(mi_check);
      rep.add(lb);
    } catch (const Error& e) {
      skip_map(std::string("map stage failed: ") + e.what());
    }
  }

  auto& d = rep.data;
  d["rows"] = nlohmann::json::array();
  for (const auto& r : out.rows) d["rows"].push_back(r.toJson());
  d["fits"] = {{"euclid", out.e_euclid.toJson()},       {"intrinsic", out.e_intr.toJson()},
               {"qh", out.e_qh.toJson()},               {"depth", out.e_depth.toJson()},
               {"sequence_max", out.e_seq_max.toJson()}, {"sequence_intrinsic", out.e_seq_intr.toJson()},
               {"grid_max", out.e_grid_max.toJson()},   {"grid_intrinsic", out.e_grid_intr.toJson()}};
  d["depths"] = out.depths;
  d["max_moduli"] = out.max_moduli;
  d["intrinsic_max_moduli"] = out.intrinsic_max_moduli;
  if (out.euclid_probe) d["probe_euclid"] = out.euclid_probe->toJson();
  if (out.intrinsic_probe) d["probe_intrinsic"] = out.intrinsic_probe->toJson();
  d["domain"] = {{"strip_length", dom->strip_length},
                 {"min_channel_width", dom->minChannelWidth()},
                 {"vertices", dom->polygon.size()}};
  return out;
}

// ---------------------------------------------------------------------------
// Euclidean and intrinsic membership agree for doubling growth functions

struct EquivalenceConfig {
  std::vector<std::string> maps{"identity", "koebe", "square", "spiral:0:20"};
  std::vector<std::string> psis{"pow:0.4", "pow:1", "pow:2"};
  std::vector<double> deltas = defaultDeltas();
  std::size_t resolution = 1024;
  int dyadic_levels = 14;
  int spiral_circles = 12;
  bool derivative = true;
  double doubling_t_max = 1e3;

  nlohmann::json toJson() const {
    return {{"maps", maps},           {"psis", psis},         {"deltas", deltas},
            {"resolution", resolution}, {"dyadic_levels", dyadic_levels},
            {"spiral_circles", spiral_circles}, {"derivative", derivative}, {"doubling_t_max", doubling_t_max}};
  }

  static EquivalenceConfig fromJson(const nlohmann::json& j) {
    EquivalenceConfig c;
    c.maps = j.value("maps", c.maps);
    c.psis = j.value("psis", c.psis);
    c.deltas = j.value("deltas", c.deltas);
    c.resolution = j.value("resolution", c.resolution);
    c.dyadic_levels = j.value("dyadic_levels", c.dyadic_levels);
    c.spiral_circles = j.value("spiral_circles", c.spiral_circles);
    c.derivative = j.value("derivative", c.derivative);
    c.doubling_t_max = j.value("doubling_t_max", c.doubling_t_max);
    return c;
  }
};

struct EquivalenceCell {
  std::string map, psi;
  Verdict euclid = Verdict::kInconclusive, intrinsic = Verdict::kInconclusive,
          derivative = Verdict::kInconclusive;
  std::string error;

  nlohmann::json toJson() const {
    nlohmann::json j{{"map", map},
                     {"psi", psi},
                     {"euclid", verdictName(euclid)},
                     {"intrinsic", verdictName(intrinsic)},
                     {"derivative", verdictName(derivative)}};
    if (!error.empty()) j["error"] = error;
    return j;
  }
};

struct EquivalenceReport {
  EquivalenceConfig config;
  std::vector<EquivalenceCell> cells;
  ExperimentReport report;

  const EquivalenceCell* find(const std::string& map, const std::string& psi) const {
    for (const auto& c : cells)
      if (c.map == map && c.psi == psi) return &c;
    return nullptr;
  }
};

namespace experiment_detail {

inline Check agreementCheck(const std::string& name, Verdict a, Verdict b, const std::string& note) {
  Check c;
  c.name = name;
  c.lo = c.hi = 1;
  c.note = note;
  if (a == Verdict::kInconclusive || b == Verdict::kInconclusive) {
    c.status = CheckStatus::kInconclusive;
  } else {
    c.measured = a == b ? 1.0 : 0.0;
    c.status = a == b ? CheckStatus::kPass : CheckStatus::kFail;
  }
  return c;
}

inline std::vector<double> probeDepths(const ConformalMap& f, const EquivalenceConfig& cfg) {
  if (const auto* sp = dynamic_cast<const SpiralMap*>(&f)) return spiralProbeDepths(sp->domain(), cfg.spiral_circles);
  return dyadicDepths(cfg.dyadic_levels);
}

}  // namespace experiment_detail

inline EquivalenceReport runEquivalence(const EquivalenceConfig& cfg) {
  using namespace experiment_detail;
  if (cfg.maps.empty() || cfg.psis.empty()) throw ParameterError("equivalence needs maps and growth functions");
  std::vector<GrowthFunction> psis;
  for (const auto& p : cfg.psis) {
    psis.push_back(GrowthFunction::parse(p));
    const auto d = doublingConstant(psis.back(), cfg.doubling_t_max, 400);
    if (!d.bounded) throw PreconditionError("growth function " + p + " is not doubling");
  }
  EquivalenceReport out;
  out.config = cfg;
  auto& rep = out.report;
  rep.experiment = "equivalence";
  rep.config = cfg.toJson();

  for (const auto& name : cfg.maps) {
    std::vector<EquivalenceCell> row;
    for (const auto& p : cfg.psis) row.push_back({name, p});
    try {
      const auto md = namedMap(name, cfg.resolution);
      const auto depths = probeDepths(*md.map, cfg);
      auto vs = std::make_shared<const VisibilityStructure>(md.polygon);
      ModulusEvaluator me(md.map, Metric::kEuclidean), mi(md.map, Metric::kIntrinsic, vs);
      const auto se = sampleCircles(me, depths);
      const auto si = sampleCircles(mi, depths);
      std::vector<RadialLengthSamples> rl;
      if (cfg.derivative)
        for (double s : depths) rl.push_back(sampleRadialLengths(*md.map, s));
      for (std::size_t k = 0; k < psis.size(); ++k) {
        row[k].euclid = membershipFromSamples(se, me, psis[k], cfg.deltas).verdict;
        row[k].intrinsic = membershipFromSamples(si, mi, psis[k], cfg.deltas).verdict;
        if (cfg.derivative) row[k].derivative = derivativeFromSamples(rl, psis[k]).verdict;
      }
    } catch (const Error& e) {
      for (auto& c : row) c.error = e.what();
    }
    for (auto& c : row) {
      const std::string key = c.map + "." + c.psi;
      const std::string note = "euclid " + verdictName(c.euclid) + ", intrinsic " + verdictName(c.intrinsic) +
                               (c.error.empty() ? "" : "; " + c.error);
      rep.add(agreementCheck("equivalence." + key, c.euclid, c.intrinsic, note));
      if (cfg.derivative)
        rep.add(agreementCheck("derivative." + key, c.derivative, c.euclid,
                               "derivative " + verdictName(c.derivative) + ", euclid " + verdictName(c.euclid)));
      out.cells.push_back(std::move(c));
    }
  }
  rep.data["cells"] = nlohmann::json::array();
  for (const auto& c : out.cells) rep.data["cells"].push_back(c.toJson());
  return out;
}

// ---------------------------------------------------------------------------
// Lemma battery

struct LemmaConfig {
  int grid_levels = 7;          // test circles at depth m ln 2, m = 1..grid_levels
  int grid_angles = 24;
  int whitney_samples = 8;      // points per Whitney disk
  double harnack_log_bound = 12.0;
  double hyperbolic_factor = 6.0;
  double diameter_c = 100.0;
  int gh_samples = 500;
  double gh_floor = 0.99;
  double gh_ceiling = 100.0;
  double gh_spearman_max = 0.5;
  double modulus_c = 100.0;
  std::vector<double> escape_m{4.0, 16.0, 64.0};
  double escape_c = 10.0;
  double qh_a_max = 10.0;
  int whitney_arcs = 16;
  int whitney_overlap_max = 8;
  double whitney_uncovered_max = 1e-9;
  double whitney_c_max = 16.0;
  double max_scale = 1e3;       // skip lattice-based checks on larger polygons
  std::uint64_t seed = 1;

  nlohmann::json toJson() const {
    return {{"grid_levels", grid_levels},
            {"grid_angles", grid_angles},
            {"whitney_samples", whitney_samples},
            {"harnack_log_bound", harnack_log_bound},
            {"hyperbolic_factor", hyperbolic_factor},
            {"diameter_c", diameter_c},
            {"gh_samples", gh_samples},
            {"gh_floor", gh_floor},
            {"gh_ceiling", gh_ceiling},
            {"gh_spearman_max", gh_spearman_max},
            {"modulus_c", modulus_c},
            {"escape_m", escape_m},
            {"escape_c", escape_c},
            {"qh_a_max", qh_a_max},
            {"whitney_arcs", whitney_arcs},
            {"whitney_overlap_max", whitney_overlap_max},
            {"whitney_uncovered_max", whitney_uncovered_max},
            {"whitney_c_max", whitney_c_max},
            {"max_scale", max_scale},
            {"seed", seed}};
  }

  static LemmaConfig fromJson(const nlohmann::json& j) {
    LemmaConfig c;
    c.grid_levels = j.value("grid_levels", c.grid_levels);
    c.grid_angles = j.value("grid_angles", c.grid_angles);
    c.whitney_samples = j.value("whitney_samples", c.whitney_samples);
    c.harnack_log_bound = j.value("harnack_log_bound", c.harnack_log_bound);
    c.hyperbolic_factor = j.value("hyperbolic_factor", c.hyperbolic_factor);
    c.diameter_c = j.value("diameter_c", c.diameter_c);
    c.gh_samples = j.value("gh_samples", c.gh_samples);
    c.gh_floor = j.value("gh_floor", c.gh_floor);
    c.gh_ceiling = j.value("gh_ceiling", c.gh_ceiling);
    c.gh_spearman_max = j.value("gh_spearman_max", c.gh_spearman_max);
    c.modulus_c = j.value("modulus_c", c.modulus_c);
    c.escape_m = j.value("escape_m", c.escape_m);
    c.escape_c = j.value("escape_c", c.escape_c);
    c.qh_a_max = j.value("qh_a_max", c.qh_a_max);
    c.whitney_arcs = j.value("whitney_arcs", c.whitney_arcs);
    c.whitney_overlap_max = j.value("whitney_overlap_max", c.whitney_overlap_max);
    c.whitney_uncovered_max = j.value("whitney_uncovered_max", c.whitney_uncovered_max);
    c.whitney_c_max = j.value("whitney_c_max", c.whitney_c_max);
    c.max_scale = j.value("max_scale", c.max_scale);
    c.seed = j.value("seed", c.seed);
    return c;
  }
};

// Test points: a polar grid, plus loop samples for the spiral.
inline std::vector<DiskPoint> lemmaTestPoints(const ConformalMap& f, const LemmaConfig& cfg) {
  std::vector<DiskPoint> pts;
  for (int m = 1; m <= cfg.grid_levels; ++m)
    for (int k = 0; k < cfg.grid_angles; ++k)
      pts.push_back({m * std::log(2.0), kTwoPi * (k + 0.5) / cfg.grid_angles, 0.0});
  if (const auto* sp = dynamic_cast<const SpiralMap*>(&f)) {
    const auto& dom = sp->domain();
    for (int j = 1; j < dom.spec.loops; ++j)
      for (double y : {-0.3 * kPi, 0.0, 0.3 * kPi})
        pts.push_back(sp->preimageAt(dom.channel(Complex(dom.loopCenterStripX(j), y))));
  }
  return pts;
}

namespace experiment_detail {

inline double logDerivative(const ConformalMap& f, const DiskPoint& p) {
  return std::log(std::abs(f.scaledDerivativeAt(p))) + p.s;
}

// GH samples: uniform over the disk of radius 1 - 2^-levels, or spread over the loops of a spiral.
struct GhSample {
  DiskPoint point;
  int loop = 0;
};

inline std::vector<GhSample> ghSamples(const ConformalMap& f, const LemmaConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GhSample> out;
  if (const auto* sp = dynamic_cast<const SpiralMap*>(&f)) {
    const auto& dom = sp->domain();
    const int j0 = 1, j1 = dom.spec.loops - 1;
    for (int i = 0; i < cfg.gh_samples; ++i) {
      const int j = j0 + i % (j1 - j0 + 1);
      const double tau = j + unit(rng);
      const double y = 0.45 * kPi * (2 * unit(rng) - 1);
      out.push_back({sp->preimageAt(dom.channel(Complex(dom.channel.stripX(tau), y))), j});
    }
    return out;
  }
  const double r_max = 1 - std::ldexp(1.0, -cfg.grid_levels);
  for (int i = 0; i < cfg.gh_samples; ++i) {
    const double r = r_max * std::sqrt(unit(rng));
    out.push_back({DiskPoint::fromComplex(std::polar(r, kTwoPi * unit(rng))), 0});
  }
  return out;
}

}  // namespace experiment_detail

inline ExperimentReport runLemmaBattery(const MappedDomain& md, const LemmaConfig& cfg = {}) {
  using namespace experiment_detail;
  ExperimentReport rep;
  rep.experiment = "lemmas";
  rep.config = cfg.toJson();
  rep.config["map"] = md.label;
  rep.seed = cfg.seed;
  const ConformalMap& f = *md.map;
  const auto* spiral = dynamic_cast<const SpiralMap*>(&f);
  // The measured fit tolerance comes from finitely many boundary samples.
  auto vs = std::make_shared<const VisibilityStructure>(md.polygon, 2 * f.fitTolerance());
  const bool large = md.polygon.scale() > cfg.max_scale;
  std::vector<std::string> omitted;
  auto guarded = [&](const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      rep.add(inconclusiveCheck(name, e.what()));
    }
  };

  const auto pts = lemmaTestPoints(f, cfg);
  rep.data["test_points"] = pts.size();

  guarded("koebe_distortion", [&] {
    double lo = INFINITY, hi = 0.0;
    for (const auto& p : pts) {
      const double ratio = std::abs(f.scaledDerivativeAt(p)) / f.boundaryDistance(f.valueAt(p));
      lo = std::min(lo, ratio), hi = std::max(hi, ratio);
    }
    rep.data["koebe_ratio"] = {{"min", lo}, {"max", hi}};
    auto c = bandCheck("koebe_distortion", hi, 0.25, 4.0, "largest |f'|(1-|z|)/d(f(z))");
    if (lo < 0.25) c.status = CheckStatus::kFail, c.note += "; smallest below 1/4";
    c.note += "; smallest " + std::to_string(lo);
    rep.add(c);
  });

  guarded("whitney_harnack", [&] {
    double worst = 0.0, worst_hyp = 0.0;
    for (const auto& z : pts) {
      const double lz = logDerivative(f, z);
      for (int q = 0; q < cfg.whitney_samples; ++q) {
        const DiskPoint x = whitneyPoint(z, 0.9, kTwoPi * q / cfg.whitney_samples);
        const double gap = std::abs(logDerivative(f, x) - lz);
        worst = std::max(worst, gap);
        const double dh = hyperbolicDistanceDeep(z, x);
        if (dh > 0) worst_hyp = std::max(worst_hyp, gap / dh);
      }
    }
    rep.data["harnack_max_log_ratio"] = worst;
    rep.data["hyperbolic_max_factor"] = worst_hyp;
    rep.add(bandCheck("whitney_harnack", worst, 0.0, cfg.harnack_log_bound, "largest |log f'(x)/f'(z)| on Whitney disks"));
    rep.add(bandCheck("hyperbolic_distortion", worst_hyp, 0.0, cfg.hyperbolic_factor,
                      "largest |log f'(x)/f'(z)| / d_h(x, z)"));
  });

  guarded("intrinsic_diameter", [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); i += 4) {
      std::vector<Complex> img{f.valueAt(pts[i])};
      for (int q = 0; q < cfg.whitney_samples; ++q)
        img.push_back(f.valueAt(whitneyPoint(pts[i], 0.9, kTwoPi * q / cfg.whitney_samples)));
      worst = std::max(worst, intrinsicDiameter(vs, img) / f.boundaryDistance(img.front()));
    }
    rep.add(bandCheck("intrinsic_diameter", worst, 0.0, cfg.diameter_c,
                      "largest diam_I f(B_z) / d(f(z)) over sampled Whitney disks"));
  });

  guarded("gehring_hayman", [&] {
    IntrinsicField from_origin(vs, f.eval(0.0));
    const auto samples = ghSamples(f, cfg);
    double lo = INFINITY, hi = 0.0;
    std::map<int, double> per_loop;
    for (const auto& g : samples) {
      const double r = ghRatio(f, from_origin, g.point);
      lo = std::min(lo, r), hi = std::max(hi, r);
      if (spiral) per_loop[g.loop] = std::max(per_loop[g.loop], r);
    }
    rep.data["gh"] = {{"min", lo}, {"max", hi}, {"samples", samples.size()}};
    rep.add(bandCheck("gehring_hayman.min", lo, cfg.gh_floor, INFINITY, "length f([0, x]) / d_I"));
    rep.add(bandCheck("gehring_hayman.max", hi, cfg.gh_floor, cfg.gh_ceiling));
    if (spiral) {
      std::vector<double> js, mx;
      for (const auto& [j, m] : per_loop) js.push_back(j), mx.push_back(m);
      rep.data["gh"]["per_loop_max"] = mx;
      rep.add(bandCheck("gehring_hayman.trend", spearman(js, mx), -1.0, cfg.gh_spearman_max,
                        "Spearman correlation of per-loop maximum with j"));
    }
  });

  if (large) {
    omitted.push_back("intrinsic_modulus");
  } else {
    guarded("intrinsic_modulus", [&] {
      LemmaCheck c;
      if (spiral) {
        const auto& dom = spiral->domain();
        const auto fam = channelFamily(dom, 1.0, dom.spec.loops - 2.0, 32);
        double radius = 0.0, L = INFINITY;
        for (const auto& cv : fam.curves) {
          radius = std::max(radius, std::abs(cv.front() - dom.loop_centers[0]));
          L = std::min(L, polylineLength(cv));
        }
        c = checkIntrinsicModulusBound(vs, {dom.loop_centers[0], radius}, fam, 2 * radius, L,
                                       dom.minChannelWidth() / 4, cfg.modulus_c);
      } else {
        const Complex e0 = f.eval(0.0);
        const double d = md.polygon.distanceToBoundary(e0);
        const double delta = d / 50;
        CurveFamily spokes{"radial-to-set", {}};
        for (int k = 0; k < 256; ++k) {
          const Complex u = std::polar(1.0, kTwoPi * (k + 0.5) / 256);
          spokes.curves.push_back({e0 + 0.5 * delta * u, e0 + 0.9 * d * u});
        }
        c = checkIntrinsicModulusBound(vs, {e0, 0.5 * delta}, spokes, delta, 0.9 * d - 0.5 * delta, delta,
                                       cfg.modulus_c);
      }
      rep.data["intrinsic_modulus"] = c.toJson();
      Check k{"intrinsic_modulus", c.ratio(), 0.0, 1.0, c.pass ? CheckStatus::kPass : CheckStatus::kFail,
              "Mod over C / log(1 + L / delta)"};
      if (!c.violations.empty()) k.note += "; " + c.violations.front();
      rep.add(k);
    });
  }

  guarded("shadow_escape", [&] {
    const DiskPoint x = spiral ? f.preimageAt(spiral->domain().loop_centers[3]) : DiskPoint::fromComplex(0.5);
    ShadowEscapeOptions opt;
    opt.c_emp = cfg.escape_c;
    // Keeps the radial samples inside a truncated image polygon.
    if (large) opt.depth_gain = 5.0;
    std::vector<double> frac;
    bool all = true;
    for (double M : cfg.escape_m) {
      const auto c = checkShadowEscapeBound(f, vs, x, M, EscapeVariant::kIntrinsic, opt);
      frac.push_back(c.measured);
      all = all && c.pass;
    }
    rep.data["shadow_escape"] = {{"M", cfg.escape_m}, {"fractions", frac}, {"depth_gain", opt.depth_gain}};
    double worst = 0.0;
    for (std::size_t i = 0; i < frac.size(); ++i)
      worst = std::max(worst, frac[i] * std::log(cfg.escape_m[i]));
    rep.add(bandCheck("shadow_escape.intrinsic", worst, 0.0, cfg.escape_c, "largest fraction times log M"));
    const bool mono = std::is_sorted(frac.rbegin(), frac.rend());
    rep.add({"shadow_escape.monotone", mono ? 1.0 : 0.0, 1, 1, mono ? CheckStatus::kPass : CheckStatus::kFail,
             "escape fraction nonincreasing in M"});
    if (f.boundaryDistance(0.0) <= 0) {
      double w = 0.0;
      for (double M : cfg.escape_m)
        w = std::max(w, checkShadowEscapeBound(f, vs, x, M, EscapeVariant::kEuclidean, opt).measured * std::log(M));
      rep.add(bandCheck("shadow_escape.euclid", w, 0.0, cfg.escape_c, "largest fraction times log M"));
    } else {
      omitted.push_back("shadow_escape.euclid");
    }
  });

  if (large) {
    omitted.push_back("qh_quasi_invariance");
  } else {
    guarded("qh_quasi_invariance", [&] {
      const double h = spiral ? 0.25 * spiral->domain().minChannelWidth() : 0.01 * md.polygon.scale();
      const auto graph = QhGraph::build(md.polygon, h);
      const auto field = graph.distancesFrom(f.eval(0.0));
      // Lattice distances are only resolved two spacings away from the boundary.
      std::vector<Complex> img;
      for (const auto& p : pts) {
        const Complex w = f.valueAt(p);
        if (md.polygon.distanceToBoundary(w) >= 2 * h) img.push_back(w);
      }
      const auto band = hyperbolicQuasiInvariance(f, field, img);
      rep.data["qh_band"] = {{"min", band.min_ratio}, {"max", band.max_ratio}, {"samples", band.samples}};
      rep.add(bandCheck("qh_quasi_invariance", band.A(), 1.0, cfg.qh_a_max, "comparability constant A"));
    });
  }

  guarded("whitney_decomposition", [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int overlap = 0;
    double uncovered = 0.0, constant = 0.0;
    for (int i = 0; i < cfg.whitney_arcs; ++i) {
      std::vector<CircleSet::Interval> iv;
      for (int k = 0; k < 1 + i % 3; ++k) iv.push_back({kTwoPi * unit(rng), 0.05 + 1.5 * unit(rng)});
      const auto set = CircleSet::fromIntervals(iv);
      if (set.isFull()) continue;
      const auto d = whitneyDecompose(set);
      overlap = std::max(overlap, d.overlap);
      uncovered = std::max(uncovered, d.uncovered);
      constant = std::max(constant, d.constant);
    }
    rep.add(bandCheck("whitney_decomposition.overlap", overlap, 1, cfg.whitney_overlap_max));
    rep.add(bandCheck("whitney_decomposition.uncovered", uncovered, 0.0, cfg.whitney_uncovered_max));
    rep.add(bandCheck("whitney_decomposition.constant", constant, 1.0, cfg.whitney_c_max));
  });

  rep.data["omitted"] = omitted;
  return rep;
}

}  // namespace holab
