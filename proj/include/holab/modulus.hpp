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

// Discrete modulus of curve families, closed-form moduli and the shadow
// escape checks built on them.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/conformal.hpp"
#include "holab/diskcells.hpp"
#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/intrinsic.hpp"
#include "holab/numerics.hpp"
#include "holab/spiral.hpp"

namespace holab {

using Polyline = std::vector<Complex>;

struct CurveFamily {
  std::string descriptor = "custom";  // radial-to-set | annulus-crossing | image-under-map | custom
  std::vector<Polyline> curves;

  std::size_t size() const { return curves.size(); }
  bool empty() const { return curves.empty(); }

  // Every vertex inside the closed domain, up to `tol` outside.
  bool liesIn(const PolygonDomain& dom, double tol = 0.0) const {
    for (const auto& c : curves)
      for (Complex z : c) {
        if (dom.unsignedBoundaryDistance(z) <= std::max(tol, dom.boundaryTolerance(z))) continue;
        if (!dom.rawContains(z)) return false;
      }
    return true;
  }

  nlohmann::json toJson() const {
    double total = 0.0;
    for (const auto& c : curves)
      for (std::size_t i = 0; i + 1 < c.size(); ++i) total += std::abs(c[i + 1] - c[i]);
    return {{"descriptor", descriptor}, {"curves", curves.size()}, {"total_length", total}};
  }
};

inline double polylineLength(const Polyline& c) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) len += std::abs(c[i + 1] - c[i]);
  return len;
}

// Segments joining {x = 0} to {x = a} in [0, a] x [0, b], at heights b (k + 1/2) / n.
inline CurveFamily horizontalFamily(double a, double b, int n) {
  CurveFamily fam{"custom", {}};
  for (int k = 0; k < n; ++k) {
    const double y = b * (k + 0.5) / n;
    fam.curves.push_back({{0.0, y}, {a, y}});
  }
  return fam;
}

// Radial segments from |z - c| = r_in to |z - c| = r_out at n equally spaced
// angles, restricted to `angles` when given.
inline CurveFamily radialFamily(double r_in, double r_out, int n, Complex center = 0.0,
                                const CircleSet* angles = nullptr) {
  if (!(r_in >= 0 && r_in < r_out)) throw ParameterError("radial family needs 0 <= r_in < r_out");
  CurveFamily fam{angles ? "radial-to-set" : "annulus-crossing", {}};
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * (k + 0.5) / n;
    if (angles && !angles->contains(t)) continue;
    const Complex u = std::polar(1.0, t);
    fam.curves.push_back({center + r_in * u, center + r_out * u});
  }
  return fam;
}

// Radial segments plus logarithmic spirals crossing the annulus r_in < |z - c| < r_out.
inline CurveFamily annulusCrossingFamily(double r_in, double r_out, int n, Complex center = 0.0,
                                         int pieces = 16) {
  CurveFamily fam = radialFamily(r_in, r_out, n, center);
  fam.descriptor = "annulus-crossing";
  for (double twist : {-1.0, 1.0}) {
    for (int k = 0; k < n; ++k) {
      Polyline c;
      for (int q = 0; q <= pieces; ++q) {
        const double u = static_cast<double>(q) / pieces;
        const double r = r_in * std::pow(r_out / r_in, u);
        c.push_back(center + std::polar(r, kTwoPi * (k + 0.25) / n + twist * u));
      }
      fam.curves.push_back(std::move(c));
    }
  }
  return fam;
}

// Curves along the spiral channel from loop j0 to loop j1, at n heights
// filling the fraction `frac` of the half-strip.
inline CurveFamily channelFamily(const SpiralDomain& dom, double j0, double j1, int n,
                                 double frac = 0.9, int samples_per_loop = 128) {
  if (!(j1 > j0)) throw ParameterError("channel family needs j1 > j0");
  CurveFamily fam{"custom", {}};
  const int steps = std::max(2, static_cast<int>(std::ceil((j1 - j0) * samples_per_loop)));
  for (int k = 0; k < n; ++k) {
    const double y = frac * (kPi / 2) * (2.0 * (k + 0.5) / n - 1.0);
    Polyline c;
    for (int q = 0; q <= steps; ++q)
      c.push_back(dom.channel(Complex(dom.channel.stripX(j0 + (j1 - j0) * q / steps), y)));
    fam.curves.push_back(std::move(c));
  }
  return fam;
}

// Image of each curve under f, with every segment subdivided into `sub` pieces.
inline CurveFamily imageFamily(const ConformalMap& f, const CurveFamily& fam, int sub = 32) {
  CurveFamily out{"image-under-map", {}};
  for (const auto& c : fam.curves) {
    Polyline img;
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      for (int q = 0; q < sub; ++q) img.push_back(f.eval(c[i] + (c[i + 1] - c[i]) * (double(q) / sub)));
    if (!c.empty()) img.push_back(f.eval(c.back()));
    out.curves.push_back(std::move(img));
  }
  return out;
}

struct DensityGrid {
  double h = 0.0;
  Complex lo;
  std::vector<std::pair<long, long>> cells;  // lattice indices of cells met by the family
  std::vector<double> rho;
  std::vector<double> residuals;             // sum rho l - 1 per curve

  double mass() const {
    double m = 0.0;
    for (double r : rho) m += r * r;
    return m * h * h;
  }
};

struct ModulusResult {
  double value = 0.0;       // mass of the admissible density
  double dual = 0.0;        // dual objective, a lower bound for the discrete problem
  double kkt_residual = 0.0;
  int sweeps = 0;
  DensityGrid density;
};

namespace modulus_detail {

// Cell lengths of a polyline on the lattice lo + h Z^2.
inline void cellLengths(const Polyline& c, Complex lo, double h,
                        std::map<std::pair<long, long>, double>& out) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    const Complex a = (c[i] - lo) / h, b = (c[i + 1] - lo) / h;
    const double len = std::abs(c[i + 1] - c[i]);
    if (len == 0) continue;
    std::vector<double> ts{0.0, 1.0};
    auto crossings = [&](double p, double q) {
      if (p == q) return;
      const double lo_k = std::ceil(std::min(p, q)), hi_k = std::floor(std::max(p, q));
      for (double k = lo_k; k <= hi_k; ++k) {
        const double t = (k - p) / (q - p);
        if (t > 0 && t < 1) ts.push_back(t);
      }
    };
    crossings(a.real(), b.real());
    crossings(a.imag(), b.imag());
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double dt = ts[k + 1] - ts[k];
      if (dt <= 0) continue;
      const Complex m = a + (b - a) * (0.5 * (ts[k] + ts[k + 1]));
      out[{static_cast<long>(std::floor(m.real())), static_cast<long>(std::floor(m.imag()))}] += dt * len;
    }
  }
}

}  // namespace modulus_detail

// Sparse constraint matrix of a family on a lattice of spacing h.
struct ModulusProblem {
  double h = 0.0;
  Complex lo;
  std::vector<std::pair<long, long>> cells;
  std::vector<std::vector<std::pair<int, double>>> rows;  // per curve: (cell, length)

  static ModulusProblem build(const CurveFamily& fam, double h, Complex lo = 0.0) {
    if (!(h > 0)) throw ParameterError("cell size must be positive");
    if (fam.empty()) throw ParameterError("curve family is empty");
    ModulusProblem p;
    p.h = h;
    p.lo = lo;
    std::map<std::pair<long, long>, int> index;
    for (const auto& c : fam.curves) {
      std::map<std::pair<long, long>, double> lens;
      modulus_detail::cellLengths(c, lo, h, lens);
      std::vector<std::pair<int, double>> row;
      double total = 0.0;
      for (const auto& [cell, l] : lens) {
        auto [it, fresh] = index.try_emplace(cell, static_cast<int>(p.cells.size()));
        if (fresh) p.cells.push_back(cell);
        row.push_back({it->second, l});
        total += l;
      }
      if (!(total > 0)) throw ParameterError("curve family contains a curve of zero length");
      p.rows.push_back(std::move(row));
    }
    return p;
  }
};

// min sum rho_c^2 h^2 subject to sum_c rho_c l_c(gamma) >= 1 for every curve,
// by coordinate ascent on the dual (Hildreth's method). The returned density
// is rescaled to be exactly admissible.
inline ModulusResult solveModulus(const ModulusProblem& p, double tol = 1e-6, int max_sweeps = 200000) {
  const std::size_t m = p.rows.size();
  const double h2 = p.h * p.h;
  std::vector<double> lambda(m, 0.0), rho(p.cells.size(), 0.0), norm2(m, 0.0);
  for (std::size_t g = 0; g < m; ++g)
    for (const auto& [c, l] : p.rows[g]) norm2[g] += l * l;
  auto dot = [&](std::size_t g) {
    double s = 0.0;
    for (const auto& [c, l] : p.rows[g]) s += l * rho[c];
    return s;
  };
  ModulusResult res;
  for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
    double change = 0.0;
    for (std::size_t g = 0; g < m; ++g) {
      const double next = std::max(0.0, lambda[g] + (1.0 - dot(g)) * 2.0 * h2 / norm2[g]);
      const double d = next - lambda[g];
      if (d == 0) continue;
      lambda[g] = next;
      for (const auto& [c, l] : p.rows[g]) rho[c] += d * l / (2.0 * h2);
      change = std::max(change, std::abs(d));
    }
    // KKT: primal feasibility and complementary slackness, relative to the mass.
    double primal = 0.0, lsum = 0.0, viol = 0.0, slack = 0.0;
    for (double r : rho) primal += r * r * h2;
    for (std::size_t g = 0; g < m; ++g) {
      const double a = dot(g);
      viol = std::max(viol, 1.0 - a);
      slack = std::max(slack, lambda[g] * std::abs(a - 1.0));
      lsum += lambda[g];
    }
    res.dual = lsum - primal;
    res.kkt_residual = std::max(viol, slack / std::max(primal, 1e-300));
    if (res.kkt_residual <= tol && std::abs(primal - res.dual) <= tol * primal) break;
  }
  if (res.sweeps > max_sweeps) throw NumericError("modulus solver did not converge");
  double worst = INFINITY;
  for (std::size_t g = 0; g < m; ++g) worst = std::min(worst, dot(g));
  for (double& r : rho) r /= worst;
  res.density.h = p.h;
  res.density.lo = p.lo;
  res.density.cells = p.cells;
  res.density.rho = std::move(rho);
  for (std::size_t g = 0; g < m; ++g) {
    double s = 0.0;
    for (const auto& [c, l] : p.rows[g]) s += l * res.density.rho[c];
    res.density.residuals.push_back(s - 1.0);
  }
  res.value = res.density.mass();
  return res;
}

inline ModulusResult discreteModulus(const CurveFamily& fam, double h, Complex lo = 0.0) {
  return solveModulus(ModulusProblem::build(fam, h, lo));
}

// sigma(E) / log(1/r) for radial segments from |z| = r to the arcs E.
inline double radialModulusExact(double e_measure, double r) {
  if (!(r > 0 && r < 1)) throw ParameterError("r must lie in (0, 1)");
  if (!(e_measure >= 0 && e_measure <= kTwoPi)) throw ParameterError("sigma(E) must lie in [0, 2 pi]");
  return e_measure / std::log(1.0 / r);
}

// 2 pi / log(R / r): modulus of the family joining the two circles.
inline double annulusModulusBound(double r, double R) {
  if (!(r > 0 && r < R)) throw ParameterError("annulus needs 0 < r < R");
  return kTwoPi / std::log(R / r);
}

struct LemmaCheck {
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::vector<std::string> violations;

  double ratio() const { return bound > 0 ? measured / bound : INFINITY; }
  nlohmann::json toJson() const {
    return {{"measured", measured}, {"bound", bound}, {"ratio", ratio()}, {"pass", pass},
            {"violations", violations}};
  }
};

// Disk E = B(center, radius) of the set the family starts from.
struct PointSet {
  Complex center;
  double radius = 0.0;
};

// Mod(fam) <= C / log(1 + L / delta) for curves with an endpoint in E,
// diam_I(E) <= delta and length >= L.
inline LemmaCheck checkIntrinsicModulusBound(const std::shared_ptr<const VisibilityStructure>& vs,
                                             const PointSet& e, const CurveFamily& fam, double delta,
                                             double L, double h, double c_emp = 100.0) {
  LemmaCheck out;
  if (!(L >= delta && delta > 0)) throw PreconditionError("need L >= delta > 0");
  std::vector<Complex> rim{e.center};
  for (int q = 0; q < 16; ++q) {
    const Complex z = e.center + e.radius * std::polar(1.0, kTwoPi * q / 16);
    if (vs->domain().unsignedBoundaryDistance(z) > vs->domain().boundaryTolerance(z) &&
        vs->domain().rawContains(z))
      rim.push_back(z);
  }
  const double diam = intrinsicDiameter(vs, rim);
  if (diam > delta * (1 + 1e-9)) out.violations.push_back("intrinsic diameter of E exceeds delta");
  const double tol = 1e-9 * std::max(1.0, std::abs(e.center));
  for (std::size_t i = 0; i < fam.curves.size(); ++i) {
    const auto& c = fam.curves[i];
    const bool starts = std::abs(c.front() - e.center) <= e.radius + tol ||
                        std::abs(c.back() - e.center) <= e.radius + tol;
    if (!starts) out.violations.push_back("curve " + std::to_string(i) + " has no endpoint in E");
    if (polylineLength(c) < L * (1 - 1e-12))
      out.violations.push_back("curve " + std::to_string(i) + " is shorter than L");
  }
  out.measured = discreteModulus(fam, h, vs->domain().boundsLo()).value;
  out.bound = c_emp / std::log(1.0 + L / delta);
  out.pass = out.violations.empty() && out.measured <= out.bound;
  return out;
}

enum class EscapeVariant { kIntrinsic, kEuclidean };

struct ShadowEscapeOptions {
  int samples = 2048;         // omega grid across S_x
  double depth_gain = 20.0;   // sample points sit at depth s_x + depth_gain
  double c_emp = 10.0;
};

// Fraction of omega in S_x whose radial point escapes: d_I(f(r omega), f(x)) > M d(f(x), dOmega)
// (intrinsic), or |f(r omega)| < |f(x)| / M (euclidean, maps omitting 0).
inline LemmaCheck checkShadowEscapeBound(const ConformalMap& f,
                                         const std::shared_ptr<const VisibilityStructure>& vs,
                                         const DiskPoint& x, double M, EscapeVariant variant,
                                         const ShadowEscapeOptions& opt = {}) {
  if (!(M > 1)) throw ParameterError("M must exceed 1");
  LemmaCheck out;
  const Complex fx = f.valueAt(x);
  std::optional<IntrinsicField> field;
  double threshold = 0.0;
  if (variant == EscapeVariant::kEuclidean) {
    if (f.boundaryDistance(0.0) > 0) throw PreconditionError("euclidean variant needs a map omitting 0");
    threshold = std::abs(fx) / M;
  } else {
    if (!vs) throw PreconditionError("intrinsic variant needs a visibility structure");
    field.emplace(vs, fx);
    threshold = M * vs->domain().distanceToBoundary(vs->admit(fx));
  }
  const auto cell = makeWhitneyCell(x);
  const double eps = x.epsilon();
  // Shadow half-width in units of 1 - |x|.
  const double half_rel = eps < 1e-8 ? 0.5 : cell.shadow.half / eps;
  const double s = x.s + opt.depth_gain;
  int escaped = 0;
  for (int k = 0; k < opt.samples; ++k) {
    const double u = -1.0 + (2.0 * k + 1.0) / opt.samples;
    const double fine = std::exp(s - x.s) * (x.fine + u * half_rel);
    const Complex w = f.valueAt(DiskPoint::offset(s, x.theta, fine));
    const bool esc = variant == EscapeVariant::kEuclidean ? std::abs(w) < threshold : field->at(w) > threshold;
    escaped += esc;
  }
  out.measured = static_cast<double>(escaped) / opt.samples;
  out.bound = opt.c_emp / std::log(M);
  out.pass = out.measured <= out.bound;
  return out;
}

}  // namespace holab
