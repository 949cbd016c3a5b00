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

// Whitney disks, shadows, Stolz cones and Whitney caps on the circle.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "holab/conformal.hpp"
#include "holab/diskpoint.hpp"
#include "holab/errors.hpp"
#include "holab/intrinsic.hpp"
#include "holab/numerics.hpp"

namespace holab {

enum class Metric { kEuclidean, kIntrinsic };

inline Metric parseMetric(const std::string& name) {
  if (name == "euclid" || name == "euclidean") return Metric::kEuclidean;
  if (name == "intrinsic") return Metric::kIntrinsic;
  throw ParameterError("metric must be euclid or intrinsic: " + name);
}

// Closed arc of the circle given by its center angle and half-width.
struct Arc {
  double center = 0.0;
  double half = 0.0;

  double measure() const { return 2.0 * std::min(half, kPi); }
  bool full() const { return half >= kPi; }
  bool contains(double angle) const { return full() || std::abs(wrapAngle(angle - center)) <= half; }
};

struct WhitneyCell {
  DiskPoint point;
  double radius = 0.0;  // (1 - |x|) / 2
  Arc shadow;

  double depthGap() const { return 2.0 * radius; }
};

inline WhitneyCell makeWhitneyCell(const DiskPoint& x) {
  WhitneyCell c;
  c.point = x;
  const double eps = x.epsilon();
  c.radius = eps / 2.0;
  c.shadow.center = x.angle();
  const double r = 1.0 - eps;
  c.shadow.half = (r >= c.radius) ? std::asin(c.radius / r) : kPi;
  return c;
}

inline WhitneyCell makeWhitneyCell(Complex x) { return makeWhitneyCell(DiskPoint::fromComplex(x)); }

// The point x + (1-|x|)/2 * fr * exp(i (arg x + phi)), fr in [0, 1), kept in
// depth form so that it stays exact for deep x.
inline DiskPoint whitneyPoint(const DiskPoint& x, double fr, double phi) {
  const double eps = x.epsilon();
  const Complex u = 1.0 - 0.5 * fr * std::polar(1.0, phi);
  const Complex q = 1.0 - eps * u;
  const double k = (2.0 * u.real() - eps * std::norm(u)) / (1.0 + std::abs(q));
  const double s = x.s - std::log(k);
  const double turn = eps > 1e-300 ? std::atan2(-eps * u.imag(), q.real()) / (eps * k) : -u.imag() / k;
  return DiskPoint::offset(s, x.theta, x.fine / k + turn);
}

// Samples of the Stolz cone at angle theta: Whitney disks centered at depths
// m ln 2 (t = 1 - 2^-m) for m = 0..m_max. Density d adds rings at fractions
// 1 - 2^-(l-1), l = 2..d, so higher densities refine lower ones.
inline std::vector<DiskPoint> stolzSamples(double theta, int density, int m_max = 20) {
  if (density < 1) throw ParameterError("density must be at least 1");
  if (m_max < 0) throw ParameterError("m_max must be nonnegative");
  std::vector<DiskPoint> out;
  for (int m = 0; m <= m_max; ++m) {
    const DiskPoint x{m * std::log(2.0), theta, 0.0};
    out.push_back(x);
    for (int l = 2; l <= density; ++l) {
      const double fr = 1.0 - std::ldexp(1.0, -(l - 1));
      const int count = 8 * (l - 1);
      for (int q = 0; q < count; ++q) out.push_back(whitneyPoint(x, fr, kTwoPi * (q + 0.5 * l) / count));
    }
  }
  return out;
}

inline std::vector<Complex> stolzSamples(Complex omega, int density, int m_max = 20) {
  std::vector<Complex> out;
  for (const auto& p : stolzSamples(std::arg(omega), density, m_max)) out.push_back(p.toComplex());
  return out;
}

// max |f| (or max |f|_I) over the sampled Stolz cone at theta.
inline double nontangentialMax(const ConformalMap& f, double theta, Metric metric, int density,
                               const IntrinsicField* from_origin = nullptr, int m_max = 20) {
  if (metric == Metric::kIntrinsic && !from_origin)
    throw PreconditionError("intrinsic maximal function needs an intrinsic field");
  double best = 0.0;
  for (const auto& p : stolzSamples(theta, density, m_max)) {
    const Complex w = f.valueAt(p);
    best = std::max(best, metric == Metric::kEuclidean ? std::abs(w) : from_origin->at(w));
  }
  return best;
}

// Finite union of arcs. Components are disjoint, sorted by start angle in
// [0, 2pi), and may wrap past 2pi.
class CircleSet {
 public:
  struct Interval {
    double lo = 0.0;
    double len = 0.0;
  };

  static CircleSet full() { return fromIntervals({{0.0, kTwoPi}}); }

  static CircleSet fromIntervals(const std::vector<Interval>& in) {
    std::vector<std::pair<double, double>> pieces;
    for (const auto& iv : in) {
      if (!(iv.len > 0)) continue;
      if (iv.len >= kTwoPi) return CircleSet({{0.0, kTwoPi}});
      const double lo = std::fmod(std::fmod(iv.lo, kTwoPi) + kTwoPi, kTwoPi);
      const double hi = lo + iv.len;
      if (hi <= kTwoPi) {
        pieces.push_back({lo, hi});
      } else {
        pieces.push_back({lo, kTwoPi});
        pieces.push_back({0.0, hi - kTwoPi});
      }
    }
    std::sort(pieces.begin(), pieces.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : pieces) {
      if (!merged.empty() && p.first <= merged.back().second)
        merged.back().second = std::max(merged.back().second, p.second);
      else
        merged.push_back(p);
    }
    if (merged.size() == 1 && merged[0].first <= 0.0 && merged[0].second >= kTwoPi)
      return CircleSet({{0.0, kTwoPi}});
    if (merged.size() > 1 && merged.front().first <= 0.0 && merged.back().second >= kTwoPi) {
      merged.back().second += merged.front().second;
      merged.erase(merged.begin());
    }
    std::vector<Interval> out;
    for (const auto& [a, b] : merged) out.push_back({a, b - a});
    return CircleSet(std::move(out));
  }

  const std::vector<Interval>& components() const { return parts_; }
  bool isFull() const { return parts_.size() == 1 && parts_[0].len >= kTwoPi; }
  bool empty() const { return parts_.empty(); }

  double measure() const {
    double m = 0.0;
    for (const auto& p : parts_) m += p.len;
    return m;
  }

  bool contains(double angle) const {
    const double a = std::fmod(std::fmod(angle, kTwoPi) + kTwoPi, kTwoPi);
    for (const auto& p : parts_) {
      const double rel = std::fmod(a - p.lo + kTwoPi, kTwoPi);
      if (rel <= p.len) return true;
    }
    return false;
  }

 private:
  explicit CircleSet(std::vector<Interval> parts) : parts_(std::move(parts)) {}
  std::vector<Interval> parts_;
};

// Length measure of a finite union of arcs.
inline double circleMeasure(const std::vector<Arc>& arcs) {
  std::vector<CircleSet::Interval> iv;
  for (const auto& a : arcs) iv.push_back({a.center - a.half, a.measure()});
  return CircleSet::fromIntervals(iv).measure();
}

struct CapDecomposition {
  CircleSet region = CircleSet::fromIntervals({});
  std::vector<WhitneyCell> cells;
  int overlap = 0;           // max number of shadows through one circle point
  double constant = 0.0;     // realized C in (1-|x|)/C <= d(S_x, dU) <= C (1-|x|)
  double uncovered = 0.0;    // measure of U not reached by any shadow
  double shadowSum = 0.0;    // sum of shadow measures
};

namespace cells_detail {

// Cell whose shadow is centered on [a, a + len] (local angles from `origin`)
// with 1 - |x| = 1.5 len, so the shadow covers the piece and stays inside U.
inline WhitneyCell capFor(double origin, double a, double len) {
  const double eps = 1.5 * len;
  return makeWhitneyCell(DiskPoint{-std::log(eps), wrapAngle(origin + a + 0.5 * len), 0.0});
}

}  // namespace cells_detail

// Dyadic Whitney caps: each component [a, b] of length L is split into
// pieces [a + L 2^-(k+1), a + L 2^-k] and their mirror images, pieces longer
// than max_piece are subdivided evenly, and splitting stops at min_piece.
inline CapDecomposition whitneyDecompose(const CircleSet& u, double max_piece = 0.25,
                                         double min_piece = 1e-11) {
  if (u.empty()) throw ParameterError("cannot decompose an empty set");
  if (u.isFull()) throw PreconditionError("the full circle has no boundary to decompose against");
  CapDecomposition out;
  out.region = u;
  out.constant = 0.0;
  for (const auto& comp : u.components()) {
    const double L = comp.len;
    // Local pieces [a, a + len] measured from comp.lo.
    std::vector<std::pair<double, double>> pieces;
    for (double len = L / 4; len >= min_piece; len /= 2) {
      pieces.push_back({len, len});              // [len, 2 len]
      pieces.push_back({L - 2 * len, len});      // mirror
    }
    std::vector<std::pair<double, double>> split;
    for (const auto& [a, len] : pieces) {
      const int m = static_cast<int>(std::ceil(len / max_piece));
      for (int i = 0; i < m; ++i) split.push_back({a + i * len / m, len / m});
    }
    std::vector<std::pair<double, double>> local;  // shadow [lo, hi] in local angles
    for (const auto& [a, len] : split) {
      const auto cell = cells_detail::capFor(comp.lo, a, len);
      const double mid = a + 0.5 * len;
      const double lo = mid - cell.shadow.half, hi = mid + cell.shadow.half;
      const double d = std::max(0.0, std::min(lo, L - hi));
      const double eps = cell.depthGap();
      out.constant = std::max(out.constant, d > 0 ? std::max(eps / d, d / eps) : INFINITY);
      out.shadowSum += cell.shadow.measure();
      local.push_back({lo, hi});
      out.cells.push_back(cell);
    }
    // Coverage and overlap by a sweep over shadow endpoints.
    std::vector<std::pair<double, int>> events;
    for (const auto& [lo, hi] : local) events.push_back({lo, +1}), events.push_back({hi, -1});
    std::sort(events.begin(), events.end(), [](auto x, auto y) {
      return x.first < y.first || (x.first == y.first && x.second > y.second);
    });
    int depth = 0;
    double covered = 0.0, last = 0.0;
    for (const auto& [pos, delta] : events) {
      const double a = std::clamp(last, 0.0, L), b = std::clamp(pos, 0.0, L);
      if (depth > 0) covered += b - a;
      depth += delta;
      out.overlap = std::max(out.overlap, depth);
      last = pos;
    }
    out.uncovered += std::max(0.0, L - covered);
  }
  return out;
}

}  // namespace holab
