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

// Acceptance suite: one line per criterion, exit status 0 only when all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "holab/experiments.hpp"

namespace {

using namespace holab;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool passed(const ExperimentReport& r, const std::string& name, std::string& detail) {
  const auto* c = r.find(name);
  if (!c) {
    detail += name + " missing; ";
    return false;
  }
  detail += name.substr(name.rfind('.') + 1) + " " + fmt("%.4g", c->measured) + " " + c->target() + "; ";
  return c->status == CheckStatus::kPass;
}

// Counts over checks with the given name prefix.
struct Tally {
  int pass = 0, fail = 0, inconclusive = 0;
  std::vector<std::string> failures;
};

Tally tally(const ExperimentReport& r, const std::string& prefix) {
  Tally t;
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    if (c.status == CheckStatus::kPass) ++t.pass;
    if (c.status == CheckStatus::kFail) ++t.fail, t.failures.push_back(c.name);
    if (c.status == CheckStatus::kInconclusive) ++t.inconclusive;
  }
  return t;
}

std::string describe(const Tally& t) {
  std::string s = std::to_string(t.pass) + " agree, " + std::to_string(t.fail) + " disagree, " +
                  std::to_string(t.inconclusive) + " inconclusive";
  for (const auto& f : t.failures) s += "; " + f;
  return s;
}

}  // namespace

int main() {
  const std::vector<std::string> names{"identity", "koebe",   "half-plane", "radial-slit-disk", "strip-log",
                                       "square",   "disk256", "lshape",     "spiral",           "spiral:1:16"};
  std::vector<std::pair<int, Outcome>> results;
  auto run = [&](int id, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    while (!o.detail.empty() && (o.detail.back() == ' ' || o.detail.back() == ';')) o.detail.pop_back();
    std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    results.push_back({id, o});
  };

  // Spiral runs shared by criteria 1-3.
  auto t0 = std::chrono::steady_clock::now();
  const auto s0 = runSpiralExperiment({});
  const double t_s0 = seconds(t0);
  SpiralExperimentConfig c1;
  c1.alpha = 1;
  c1.loops = 16;
  c1.skip_map = true;
  t0 = std::chrono::steady_clock::now();
  const auto s1 = runSpiralExperiment(c1);
  const double t_s1 = seconds(t0);

  run(1, [&] {
    Outcome o{true, "alpha=0 J=20: "};
    for (const char* n : {"spiral.exponent.euclid", "spiral.exponent.intrinsic", "spiral.exponent.qh"})
      o.pass &= passed(s0.report, n, o.detail);
    o.detail += "alpha=1 J=16: ";
    for (const char* n : {"spiral.exponent.euclid", "spiral.exponent.intrinsic", "spiral.exponent.qh"})
      o.pass &= passed(s1.report, n, o.detail);
    o.pass &= t_s0 < 120 && t_s1 < 120;
    o.detail += fmt("runtimes %.1fs", t_s0) + fmt(" / %.1fs", t_s1);
    return o;
  });

  run(2, [&] {
    Outcome o{true, "alpha=0 J=20: "};
    o.pass &= passed(s0.report, "spiral.max_modulus.euclid", o.detail);
    o.pass &= passed(s0.report, "spiral.max_modulus.intrinsic", o.detail);
    return o;
  });

  run(3, [&] {
    Outcome o{true, ""};
    o.pass &= passed(s0.report, "spiral.membership.euclid", o.detail);
    o.detail += "intrinsic " + s0.report.find("spiral.membership.intrinsic")->note + "; ";
    // Strict here: every delta must push (1-r) psi(delta M_I) past 1e6.
    double worst = INFINITY;
    for (const auto& d : s0.intrinsic_probe->deltas)
      worst = std::min(worst, *std::max_element(d.log_lower_bound.begin(), d.log_lower_bound.end()) / std::log(10.0));
    o.pass &= worst > 6.0;
    o.detail += fmt("worst-delta log10 lower bound %.4g (> 6)", worst);
    return o;
  });

  t0 = std::chrono::steady_clock::now();
  const auto eq = runEquivalence({});
  const double t_eq = seconds(t0);

  run(4, [&] {
    const auto t = tally(eq.report, "equivalence.");
    return Outcome{t.fail == 0 && t.pass > 0, describe(t) + fmt(" (%.1fs)", t_eq)};
  });

  run(5, [&] {
    const auto t = tally(eq.report, "derivative.");
    return Outcome{t.fail == 0 && t.pass > 0, describe(t)};
  });

  run(6, [&] {
    const Complex lo(-1.5, -1.5);
    const double radial = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.05, lo).value;
    const double rect = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 16).value;
    const double ann = discreteModulus(annulusCrossingFamily(1, std::exp(1.0), 256), 0.1, Complex(-3, -3)).value;
    const double ann_bound = annulusModulusBound(1, std::exp(1.0));
    Outcome o;
    o.pass = std::abs(radial / kTwoPi - 1) <= 0.1 && std::abs(rect / 0.5 - 1) <= 0.1 && ann <= 1.1 * ann_bound;
    o.detail = fmt("radial %.4f vs 2pi", radial) + fmt(", rectangle %.4f vs 0.5", rect) +
               fmt(", annulus %.4f", ann) + fmt(" <= 1.1 x %.4f", ann_bound);
    return o;
  });

  // Lemma batteries shared by criteria 7-9.
  std::vector<std::pair<std::string, ExperimentReport>> batteries;
  for (const auto& n : names) batteries.push_back({n, runLemmaBattery(namedMap(n, 1024))});

  auto across = [&](const std::string& check, const char* f) {
    Outcome o{true, ""};
    double worst = -INFINITY;
    for (const auto& [n, r] : batteries) {
      const auto* c = r.find(check);
      if (!c || c->status != CheckStatus::kPass) {
        o.pass = false;
        o.detail += n + " " + (c ? statusName(c->status) + " " + fmt("%.4g", c->measured) : "missing") + "; ";
      } else {
        worst = std::max(worst, c->measured);
      }
    }
    o.detail += std::to_string(batteries.size()) + " maps, " + fmt(f, worst);
    return o;
  };

  run(7, [&] {
    auto o = across("koebe_distortion", "largest ratio %.4f");
    double lo = INFINITY;
    for (const auto& [n, r] : batteries) lo = std::min(lo, r.data["koebe_ratio"]["min"].get<double>());
    o.detail += fmt(", smallest %.4f, band [1/4, 4]", lo);
    return o;
  });

  run(8, [&] {
    auto o = across("whitney_harnack", "largest log ratio %.4f");
    o.detail += " (bound 12)";
    return o;
  });

  run(9, [&] {
    auto o = across("gehring_hayman.max", "largest ratio %.4f");
    const auto floor = across("gehring_hayman.min", "");
    o.pass &= floor.pass;
    double lo = INFINITY;
    for (const auto& [n, r] : batteries) lo = std::min(lo, r.data["gh"]["min"].get<double>());
    o.detail += fmt(", smallest %.4f (>= 0.99)", lo);
    for (const auto& [n, r] : batteries) {
      if (n.rfind("spiral", 0) != 0) continue;
      o.detail += "; " + n + " Spearman";
      const auto* c = r.find("gehring_hayman.trend");
      o.pass &= c && c->status == CheckStatus::kPass;
      o.detail += c ? fmt(" %.3f (< 0.5)", c->measured) : " missing";
    }
    return o;
  });

  run(10, [&] {
    const std::vector<double> disk_h{0.1, 0.05, 0.025}, sq_h{0.04, 0.02, 0.01};
    const auto qd = qhConvergenceDiagnostic(regularPolygon(512), 0.0, 0.5, disk_h);
    const auto qs = qhConvergenceDiagnostic(unitSquare(), {0.5, 0.5}, {0.9, 0.9}, sq_h);
    const Complex lo(-1.5, -1.5);
    const double ma = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.05, lo).value;
    const double mb = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.025, lo).value;
    const double ra = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 16).value;
    const double rb = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 32).value;
    const double dm = std::max(std::abs(ma - mb) / mb, std::abs(ra - rb) / rb);
    Outcome o;
    o.pass = qd.last_change <= 0.05 && qs.last_change <= 0.05 && dm <= 0.10;
    o.detail = fmt("qh disk %.4f", qd.last_change) + fmt(", qh square %.4f (<= 0.05)", qs.last_change) +
               fmt(", modulus %.4f (<= 0.10)", dm);
    return o;
  });

  run(11, [&] {
    Outcome o{true, ""};
    for (double p : {0.4, 1.0, 1.5, 2.0, 3.0}) {
      const auto d = doublingConstant(GrowthFunction::power(p), 1e3, 400);
      const double want = std::pow(2.0, p);
      o.pass &= d.bounded && std::abs(d.constant - want) <= 1e-12 * want;
      o.detail += fmt("pow:%g ", p) + fmt("%.12g; ", d.constant);
    }
    for (double a : {0.0, 1.0}) {
      const auto d = doublingConstant(GrowthFunction::expAlpha(a), 1e3, 400);
      o.pass &= !d.bounded;
      o.detail += fmt("expalpha:%g ", a) + (d.bounded ? "bounded; " : "unbounded; ");
    }
    return o;
  });

  int failed = 0;
  for (const auto& [id, o] : results) failed += !o.pass;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed ? 1 : 0;
}
