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

// Hardy-Orlicz circle integrals, maximum moduli and membership probes.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/conformal.hpp"
#include "holab/diskcells.hpp"
#include "holab/diskpoint.hpp"
#include "holab/errors.hpp"
#include "holab/growth.hpp"
#include "holab/intrinsic.hpp"
#include "holab/numerics.hpp"

namespace holab {

enum class Verdict { kBounded, kDiverging, kInconclusive };

inline std::string verdictName(Verdict v) {
  switch (v) {
    case Verdict::kBounded: return "bounded-trend";
    case Verdict::kDiverging: return "diverging-trend";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline Verdict parseVerdict(const std::string& s) {
  if (s == "bounded-trend") return Verdict::kBounded;
  if (s == "diverging-trend") return Verdict::kDiverging;
  if (s == "inconclusive") return Verdict::kInconclusive;
  throw FormatError("unknown verdict: " + s);
}

inline std::string metricName(Metric m) { return m == Metric::kEuclidean ? "euclid" : "intrinsic"; }

// Quadrature over the circle |z| = 1 - e^-s. Around each singular direction
// the offset is graded: Gauss panels on phi in [0, 1] and on v = log phi up to
// the gap midpoint, where the angle offset is e^-s phi. Without singular
// directions the circle is split into uniform panels. Offsets beyond e^600
// are moved to a shallower point with the same 1 - z to double precision.
struct CircleRuleOptions {
  int uniform_panels = 64;
  int gauss = 8;
  double panel_dv = 0.5;      // log-panel width near both ends of the offset range
  double max_widening = 8.0;  // growth factor of the width in the middle
};

struct CircleNode {
  DiskPoint point;
  double log_weight = 0.0;  // log of the d-theta weight
  int panel = 0;
  double u = 0.0;           // panel parameter
};

struct CirclePanel {
  double base = 0.0;   // angle the offset is measured from
  double sign = 1.0;
  bool logarithmic = false;
  double a = 0.0, b = 0.0;

  // Offset in units of e^-s and the log Jacobian d(offset)/du.
  std::pair<double, double> offset(double u) const {
    if (!logarithmic) return {u, 0.0};
    return {std::exp(std::min(u, 700.0)), u};
  }
};

class CircleRule {
 public:
  CircleRule(double s, std::vector<double> singular, CircleRuleOptions opt = {})
      : s_(s), opt_(opt), gauss_(gaussLegendre(opt.gauss)), half_gauss_(gaussLegendre(std::max(1, opt.gauss / 2))) {
    if (!(s > 0)) throw ParameterError("circle depth must be positive");
    if (opt.uniform_panels < 1 || opt.gauss < 1) throw ParameterError("bad circle rule options");
    for (double& t : singular) t = std::fmod(std::fmod(t, kTwoPi) + kTwoPi, kTwoPi);
    std::sort(singular.begin(), singular.end());
    singular.erase(std::unique(singular.begin(), singular.end(),
                               [](double x, double y) { return std::abs(x - y) < 1e-12; }),
                   singular.end());
    if (singular.empty()) {
      // Uniform panels, measured from angle 0 in units of e^-s.
      const double scale = std::exp(s_);
      for (int k = 0; k < opt.uniform_panels; ++k) {
        const double a = kTwoPi * k / opt.uniform_panels, b = kTwoPi * (k + 1) / opt.uniform_panels;
        panels_.push_back({0.0, 1.0, false, a * scale, b * scale});
      }
      return;
    }
    const std::size_t n = singular.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double gap = (n == 1) ? kTwoPi : std::fmod(singular[(k + 1) % n] - singular[k] + kTwoPi, kTwoPi);
      addGraded(singular[k], +1.0, gap / 2);
      addGraded(singular[(k + 1) % n], -1.0, gap / 2);
    }
  }

  double depth() const { return s_; }
  const std::vector<CirclePanel>& panels() const { return panels_; }

  DiskPoint pointAt(int panel, double u) const { return rayPoint(panel, u, s_); }

  // Point at depth d on the ray through the node (panel, u).
  DiskPoint rayPoint(int panel, double u, double d) const {
    const auto& p = panels_[panel];
    constexpr double kLogCap = 600.0;
    const double log_fine = (p.logarithmic ? u : std::log(u)) - s_ + d;
    if (log_fine > kLogCap) return DiskPoint::offset(d - (log_fine - kLogCap), p.base, p.sign * std::exp(kLogCap));
    return DiskPoint::offset(d, p.base, p.sign * std::exp(log_fine));
  }

  // Gauss nodes on every panel; `coarse` uses half as many.
  std::vector<CircleNode> nodes(bool coarse = false) const {
    const GaussRule& rule = coarse ? half_gauss_ : gauss_;
    std::vector<CircleNode> out;
    for (int i = 0; i < static_cast<int>(panels_.size()); ++i) {
      const auto& p = panels_[i];
      const double w = p.b - p.a;
      for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
        const double u = p.a + 0.5 * w * (rule.nodes[g] + 1.0);
        const double lj = p.offset(u).second;
        out.push_back({pointAt(i, u), -s_ + lj + std::log(0.5 * w * rule.weights[g]), i, u});
      }
    }
    return out;
  }

 private:
  void addGraded(double base, double sign, double half_gap) {
    const double span = std::log(half_gap) + s_;  // log of the half gap in units of e^-s
    if (span <= 0) {
      panels_.push_back({base, sign, false, 0.0, std::exp(span)});
      return;
    }
    panels_.push_back({base, sign, false, 0.0, 1.0});
    double v = 0.0;
    while (v < span) {
      const double edge = std::min(v, span - v);
      const double w = opt_.panel_dv * std::min(opt_.max_widening, 1.0 + edge / 10.0);
      const double next = (span - v < 1.5 * w) ? span : v + w;
      panels_.push_back({base, sign, true, v, next});
      v = next;
    }
  }

  double s_;
  CircleRuleOptions opt_;
  GaussRule gauss_, half_gauss_;
  std::vector<CirclePanel> panels_;
};

// Modulus function m(z) = |f(z)| or |f(z)|_I.
class ModulusEvaluator {
 public:
  ModulusEvaluator(std::shared_ptr<const ConformalMap> f, Metric metric,
                   std::shared_ptr<const VisibilityStructure> vs = nullptr)
      : f_(std::move(f)), metric_(metric) {
    if (metric == Metric::kIntrinsic) {
      if (!vs) throw PreconditionError("intrinsic evaluation needs a visibility structure");
      field_ = std::make_shared<IntrinsicField>(std::move(vs), f_->eval(0.0));
    }
  }

  double operator()(const DiskPoint& p) const {
    const Complex w = f_->valueAt(p);
    return metric_ == Metric::kEuclidean ? std::abs(w) : field_->at(w);
  }

  const ConformalMap& map() const { return *f_; }
  Metric metric() const { return metric_; }
  const IntrinsicField* field() const { return field_.get(); }

 private:
  std::shared_ptr<const ConformalMap> f_;
  Metric metric_;
  std::shared_ptr<IntrinsicField> field_;
};

// Moduli sampled on one circle, on the base rule and on the half-order rule.
struct CircleSamples {
  double s = 0.0;
  std::vector<CircleNode> coarse, fine;
  std::vector<double> coarse_m, fine_m;
  double max_m = 0.0;
  DiskPoint argmax;
};

inline CircleSamples sampleCircle(const ModulusEvaluator& m, double s, const CircleRuleOptions& opt = {}) {
  const CircleRule rule(s, m.map().singularDirections(), opt);
  CircleSamples out;
  out.s = s;
  out.coarse = rule.nodes(true);
  out.fine = rule.nodes(false);
  int best_panel = -1;
  double best_u = 0.0;
  auto eval = [&](const std::vector<CircleNode>& nodes, std::vector<double>& vals) {
    vals.reserve(nodes.size());
    for (const auto& n : nodes) {
      const double v = m(n.point);
      vals.push_back(v);
      if (v > out.max_m) out.max_m = v, out.argmax = n.point, best_panel = n.panel, best_u = n.u;
    }
  };
  eval(out.coarse, out.coarse_m);
  eval(out.fine, out.fine_m);
  // Golden-section polish of the maximum inside its panel.
  if (best_panel >= 0) {
    const auto& p = rule.panels()[best_panel];
    const double w = (p.b - p.a) / opt.gauss;
    double lo = std::max(p.a, best_u - w), hi = std::min(p.b, best_u + w);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = m(rule.pointAt(best_panel, x1)), f2 = m(rule.pointAt(best_panel, x2));
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) {
        hi = x2, x2 = x1, f2 = f1, x1 = hi - g * (hi - lo), f1 = m(rule.pointAt(best_panel, x1));
      } else {
        lo = x1, x1 = x2, f1 = f2, x2 = lo + g * (hi - lo), f2 = m(rule.pointAt(best_panel, x2));
      }
    }
    const double u = 0.5 * (lo + hi);
    const double v = m(rule.pointAt(best_panel, u));
    if (v > out.max_m) out.max_m = v, out.argmax = rule.pointAt(best_panel, u);
  }
  return out;
}

struct CircleIntegral {
  double log_value = kNegInf;  // log of the integral over d-sigma
  double refinement = 0.0;     // |log(fine) - log(coarse)| / max(1, |log(fine)|)

  double value() const { return std::exp(log_value); }
};

inline CircleIntegral orliczFromSamples(const CircleSamples& cs, const GrowthFunction& psi, double delta) {
  if (!(delta > 0)) throw ParameterError("delta must be positive");
  auto integrate = [&](const std::vector<CircleNode>& nodes, const std::vector<double>& m) {
    LogAccumulator acc;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double t = delta * m[i];
      if (t <= 0) continue;
      acc.add(psi.logEvaluate(t) + nodes[i].log_weight);
    }
    return acc.log();
  };
  CircleIntegral out;
  const double c = integrate(cs.coarse, cs.coarse_m);
  out.log_value = integrate(cs.fine, cs.fine_m);
  if (std::isfinite(out.log_value) && std::isfinite(c))
    out.refinement = std::abs(out.log_value - c) / std::max(1.0, std::abs(out.log_value));
  else if (std::isfinite(out.log_value) != std::isfinite(c))
    out.refinement = INFINITY;
  return out;
}

// Depth of the circle |z| = r.
inline double depthOf(double r) {
  if (!(r > 0 && r < 1)) throw ParameterError("r must lie in (0, 1)");
  return -std::log1p(-r);
}

inline CircleIntegral orliczCircleIntegral(const ModulusEvaluator& m, const GrowthFunction& psi, double delta,
                                           double s, const CircleRuleOptions& opt = {}) {
  if (opt.uniform_panels * opt.gauss < 64) throw ParameterError("need at least 64 circle samples");
  return orliczFromSamples(sampleCircle(m, s, opt), psi, delta);
}

inline double maxModulus(const ModulusEvaluator& m, double s, const CircleRuleOptions& opt = {}) {
  return sampleCircle(m, s, opt).max_m;
}

// Running supremum of a sequence (the monotone envelope used for M_I).
inline std::vector<double> runningSup(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double best = -INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = best = std::max(best, v[i]);
  return out;
}

// Trend verdict on log-values against u = log s (= log log 1/(1-r)).
// Bounded: the last three values lie within 5% or are nonincreasing.
// Diverging: over the last five values the sequence increases and the slope
// in u over the later half exceeds the earlier half by 10%.
inline Verdict trendVerdict(const std::vector<double>& s, const std::vector<double>& log_values) {
  const std::size_t n = log_values.size();
  if (n < 3 || s.size() != n) return Verdict::kInconclusive;
  for (double v : log_values)
    if (std::isnan(v)) return Verdict::kInconclusive;
  const double a = log_values[n - 3], b = log_values[n - 2], c = log_values[n - 1];
  if (std::isinf(c) && c < 0) return Verdict::kBounded;
  const double hi = std::max({a, b, c}), lo = std::min({a, b, c});
  if (hi - lo < std::log(1.05) || (b <= a && c <= b)) return Verdict::kBounded;
  if (n < 5) return Verdict::kInconclusive;
  std::vector<double> u, L;
  for (std::size_t i = n - 5; i < n; ++i) u.push_back(std::log(s[i])), L.push_back(log_values[i]);
  for (std::size_t i = 1; i < L.size(); ++i)
    if (!(L[i] > L[i - 1])) return Verdict::kInconclusive;
  const double d_early = (L[2] - L[0]) / (u[2] - u[0]);
  const double d_late = (L[4] - L[2]) / (u[4] - u[2]);
  if (d_late > 0 && d_late > 1.1 * d_early && L[4] - L[0] > std::log(1.05)) return Verdict::kDiverging;
  return Verdict::kInconclusive;
}

// Existential quantifier over delta: member if any delta is bounded,
// nonmember if every delta diverges.
inline Verdict combineDeltas(const std::vector<Verdict>& vs) {
  if (vs.empty()) return Verdict::kInconclusive;
  bool all_div = true;
  for (auto v : vs) {
    if (v == Verdict::kBounded) return Verdict::kBounded;
    all_div &= v == Verdict::kDiverging;
  }
  return all_div ? Verdict::kDiverging : Verdict::kInconclusive;
}

inline double fitSlope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return NAN;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && std::isfinite(y[i])) lx.push_back(std::log(x[i])), ly.push_back(y[i]);
  if (lx.size() < 2) return NAN;
  return leastSquaresSlope(lx, ly);
}

struct DeltaSeries {
  double delta = 0.0;
  std::vector<double> log_integrals;
  std::vector<double> refinement;
  std::vector<double> log_lower_bound;  // log((1 - r) psi(delta M))
  std::vector<double> log_partial_sums; // log of int_0^r psi(delta M(t)) dt
  double growth_slope = NAN;            // d log I / d log s
  Verdict verdict = Verdict::kInconclusive;
};

struct HardyProbeResult {
  std::string map;
  std::string psi;
  Metric metric = Metric::kEuclidean;
  std::vector<double> depths;  // s with 1 - r = e^-s
  std::vector<double> max_moduli;
  std::vector<DeltaSeries> deltas;
  Verdict verdict = Verdict::kInconclusive;

  std::vector<double> radii() const {
    std::vector<double> r;
    for (double s : depths) r.push_back(-std::expm1(-s));
    return r;
  }

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["map"] = map;
    j["psi"] = psi;
    j["metric"] = metricName(metric);
    j["depths"] = depths;
    j["radii"] = radii();
    j["max_moduli"] = max_moduli;
    j["verdict"] = verdictName(verdict);
    auto finite = [](const std::vector<double>& v) {
      nlohmann::json a = nlohmann::json::array();
      for (double x : v) a.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr));
      return a;
    };
    j["max_moduli"] = finite(max_moduli);
    for (const auto& d : deltas) {
      j["deltas"].push_back({{"delta", d.delta},
                             {"log_integrals", finite(d.log_integrals)},
                             {"refinement", finite(d.refinement)},
                             {"log_lower_bound", finite(d.log_lower_bound)},
                             {"log_partial_sums", finite(d.log_partial_sums)},
                             {"growth_slope", std::isfinite(d.growth_slope) ? nlohmann::json(d.growth_slope)
                                                                           : nlohmann::json(nullptr)},
                             {"verdict", verdictName(d.verdict)}});
    }
    return j;
  }

  // Flat (delta, s, r, log integral) rows.
  std::string toCsv() const {
    std::ostringstream os;
    os.precision(17);
    os << "delta,s,r,log_integral,max_modulus\n";
    const auto r = radii();
    for (const auto& d : deltas)
      for (std::size_t i = 0; i < depths.size(); ++i)
        os << d.delta << ',' << depths[i] << ',' << r[i] << ',' << d.log_integrals[i] << ',' << max_moduli[i] << '\n';
    return os.str();
  }
};

inline std::vector<double> dyadicDepths(int m_max = 14) {
  std::vector<double> s;
  for (int m = 1; m <= m_max; ++m) s.push_back(m * std::log(2.0));
  return s;
}

inline std::vector<double> defaultDeltas() {
  std::vector<double> d;
  for (int k = 0; k <= 10; ++k) d.push_back(std::ldexp(1.0, -k));
  return d;
}

inline std::vector<CircleSamples> sampleCircles(const ModulusEvaluator& m, const std::vector<double>& depths,
                                                const CircleRuleOptions& opt = {}) {
  if (depths.size() < 3) throw ParameterError("membership probe needs at least three radii");
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (!(depths[i] > depths[i - 1])) throw ParameterError("radii must increase");
  std::vector<CircleSamples> out;
  for (double s : depths) out.push_back(sampleCircle(m, s, opt));
  return out;
}

// Probe from precomputed circle samples; the samples do not depend on psi or delta.
inline HardyProbeResult membershipFromSamples(const std::vector<CircleSamples>& samples, const ModulusEvaluator& m,
                                              const GrowthFunction& psi, const std::vector<double>& deltas) {
  if (deltas.empty()) throw ParameterError("membership probe needs a delta list");
  HardyProbeResult out;
  out.map = m.map().name();
  out.psi = psi.spec();
  out.metric = m.metric();
  for (const auto& cs : samples) {
    out.depths.push_back(cs.s);
    out.max_moduli.push_back(cs.max_m);
  }
  const auto& depths = out.depths;
  std::vector<Verdict> verdicts;
  for (double delta : deltas) {
    DeltaSeries d;
    d.delta = delta;
    LogAccumulator partial;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto ci = orliczFromSamples(samples[i], psi, delta);
      d.log_integrals.push_back(ci.log_value);
      d.refinement.push_back(ci.refinement);
      const double lp = out.max_moduli[i] > 0 ? psi.logEvaluate(delta * out.max_moduli[i]) : kNegInf;
      d.log_lower_bound.push_back(-depths[i] + lp);
      // int psi(delta M(r)) dr with dr = e^-s ds, trapezoid in s.
      const double s0 = i ? depths[i - 1] : 0.0;
      partial.add(std::log(depths[i] - s0) + lp - depths[i]);
      d.log_partial_sums.push_back(partial.log());
    }
    d.growth_slope = fitSlope(depths, d.log_integrals);
    d.verdict = trendVerdict(depths, d.log_integrals);
    verdicts.push_back(d.verdict);
    out.deltas.push_back(std::move(d));
  }
  out.verdict = combineDeltas(verdicts);
  return out;
}

inline HardyProbeResult membershipProbe(const ModulusEvaluator& m, const GrowthFunction& psi,
                                        const std::vector<double>& deltas, const std::vector<double>& depths,
                                        const CircleRuleOptions& opt = {}) {
  if (deltas.empty()) throw ParameterError("membership probe needs a delta list");
  return membershipFromSamples(sampleCircles(m, depths, opt), m, psi, deltas);
}

// Circle integral of psi(length f([0, r omega])), with the trend verdict over depths.
struct DerivativeCriterion {
  std::vector<double> depths;
  std::vector<double> log_values;
  Verdict verdict = Verdict::kInconclusive;

  nlohmann::json toJson() const {
    return {{"depths", depths}, {"log_values", log_values}, {"verdict", verdictName(verdict)}};
  }
};

// Lengths of f([0, r omega]) at the circle nodes.
struct RadialLengthSamples {
  double s = 0.0;
  std::vector<CircleNode> nodes;
  std::vector<double> lengths;
};

inline RadialLengthSamples sampleRadialLengths(const ConformalMap& f, double s, const CircleRuleOptions& opt = {}) {
  const CircleRule rule(s, f.singularDirections(), opt);
  RadialLengthSamples out;
  out.s = s;
  out.nodes = rule.nodes(true);
  for (const auto& n : out.nodes)
    out.lengths.push_back(rayImageLength(f, [&](double d) { return rule.rayPoint(n.panel, n.u, d); }, s, 1e-4));
  return out;
}

inline double derivativeFromSamples(const RadialLengthSamples& rl, const GrowthFunction& psi) {
  LogAccumulator acc;
  for (std::size_t i = 0; i < rl.nodes.size(); ++i)
    if (rl.lengths[i] > 0) acc.add(psi.logEvaluate(rl.lengths[i]) + rl.nodes[i].log_weight);
  return acc.log();
}

inline double derivativeCriterionAt(const ConformalMap& f, const GrowthFunction& psi, double s,
                                    const CircleRuleOptions& opt = {}) {
  return derivativeFromSamples(sampleRadialLengths(f, s, opt), psi);
}

inline DerivativeCriterion derivativeFromSamples(const std::vector<RadialLengthSamples>& rls,
                                                 const GrowthFunction& psi) {
  DerivativeCriterion out;
  for (const auto& rl : rls) {
    out.depths.push_back(rl.s);
    out.log_values.push_back(derivativeFromSamples(rl, psi));
  }
  out.verdict = trendVerdict(out.depths, out.log_values);
  return out;
}

inline DerivativeCriterion derivativeCriterion(const ConformalMap& f, const GrowthFunction& psi,
                                               const std::vector<double>& depths,
                                               const CircleRuleOptions& opt = {}) {
  std::vector<RadialLengthSamples> rls;
  for (double s : depths) rls.push_back(sampleRadialLengths(f, s, opt));
  return derivativeFromSamples(rls, psi);
}

// f*(omega) on n equally spaced omega, sampled over the Stolz cone.
inline std::vector<double> maximalSamples(const ModulusEvaluator& m, int omegas, int density, int m_max = 20) {
  if (omegas < 1) throw ParameterError("need at least one omega sample");
  std::vector<double> out;
  for (int k = 0; k < omegas; ++k) {
    double best = 0.0;
    for (const auto& p : stolzSamples(kTwoPi * k / omegas, density, m_max)) best = std::max(best, m(p));
    out.push_back(best);
  }
  return out;
}

// Trapezoid rule of psi(scale f*), in log form.
inline double logMaximalIntegral(const std::vector<double>& fstar, const GrowthFunction& psi, double scale) {
  LogAccumulator acc;
  const double w = std::log(kTwoPi / fstar.size());
  for (double v : fstar)
    if (v > 0) acc.add(psi.logEvaluate(scale * v) + w);
  return acc.log();
}

// Trapezoid rule over n equally spaced omega of psi(delta f*(omega)).
inline double nontangentialOrliczIntegral(const ModulusEvaluator& m, const GrowthFunction& psi, double delta,
                                          int omegas, int density, int m_max = 20) {
  return std::exp(logMaximalIntegral(maximalSamples(m, omegas, density, m_max), psi, delta));
}

// Smallest C in `cs` with int psi(delta f* / C) <= int psi(delta |f(r omega)|) on the
// circle at the cone's depth cap; NaN when none qualifies.
inline double maximalFunctionConstant(const ModulusEvaluator& m, const GrowthFunction& psi, double delta,
                                      const std::vector<double>& cs, int omegas, int density, int m_max = 20) {
  const auto fstar = maximalSamples(m, omegas, density, m_max);
  const double rhs = orliczCircleIntegral(m, psi, delta, m_max * std::log(2.0)).log_value;
  for (double c : cs)
    if (logMaximalIntegral(fstar, psi, delta / c) <= rhs) return c;
  return NAN;
}

// Largest eps in `eps` with int psi(eps f*) <= factor * int psi(delta |f(r omega)|); NaN when none.
inline double maximalFunctionEpsilon(const ModulusEvaluator& m, const GrowthFunction& psi, double delta,
                                     const std::vector<double>& eps, double factor, int omegas, int density,
                                     int m_max = 20) {
  const auto fstar = maximalSamples(m, omegas, density, m_max);
  const double rhs = orliczCircleIntegral(m, psi, delta, m_max * std::log(2.0)).log_value + std::log(factor);
  double best = NAN;
  for (double e : eps)
    if (logMaximalIntegral(fstar, psi, e) <= rhs && !(e <= best)) best = e;
  return best;
}

inline void writeText(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace holab
