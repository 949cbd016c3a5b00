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

// Intrinsic path distance in polygon domains, image-curve lengths and the
// Gehring-Hayman ratio.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "holab/conformal.hpp"
#include "holab/diskpoint.hpp"
#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"
#include "holab/triangulate.hpp"

namespace holab {

// Triangulated polygon with triangle point location. Shortest paths are
// found by the funnel algorithm along the dual-tree sleeve, so they bend
// only at reflex vertices. Immutable after construction.
class VisibilityStructure {
 public:
  explicit VisibilityStructure(std::shared_ptr<const PolygonDomain> dom, double snap_tol = 0.0)
      : dom_(std::move(dom)), snap_tol_(snap_tol) {
    tri_ = triangulate(*dom_);
    buildLocator();
  }
  explicit VisibilityStructure(const PolygonDomain& dom, double snap_tol = 0.0)
      : VisibilityStructure(std::make_shared<const PolygonDomain>(dom), snap_tol) {}

  const PolygonDomain& domain() const { return *dom_; }
  const Triangulation& triangulation() const { return tri_; }
  std::size_t triangleCount() const { return tri_.triangles.size(); }
  double snapTolerance() const { return std::max(snap_tol_, dom_->chordTolerance()); }

  // Interior representative of z; points outside by more than the snap
  // tolerance throw PositionError.
  Complex admit(Complex z) const {
    const double tol = std::max(snapTolerance(), dom_->boundaryTolerance(z));
    return dom_->snapInside(z, tol);
  }

  // Triangle containing z (z already admitted).
  int locate(Complex z) const {
    const auto& v = dom_->vertices();
    int best = -1;
    double best_slack = -std::numeric_limits<double>::infinity();
    const std::size_t c = cellOf(z);
    for (int t : buckets_[c]) {
      const auto& tr = tri_.triangles[t];
      const Complex a = v[tr[0]], b = v[tr[1]], d = v[tr[2]];
      const double s = std::min({cross(b - a, z - a) / std::abs(b - a),
                                 cross(d - b, z - b) / std::abs(d - b),
                                 cross(a - d, z - d) / std::abs(a - d)});
      if (s >= 0) return t;
      if (s > best_slack) best_slack = s, best = t;
    }
    if (best < 0 || best_slack < -1e3 * std::max(snapTolerance(), dom_->boundaryTolerance(z)))
      throw PositionError("point is not covered by the triangulation");
    return best;
  }

 private:
  std::size_t cellOf(Complex z) const {
    const int x = std::clamp(static_cast<int>((z.real() - lo_.real()) / cw_), 0, side_ - 1);
    const int y = std::clamp(static_cast<int>((z.imag() - lo_.imag()) / ch_), 0, side_ - 1);
    return static_cast<std::size_t>(y) * side_ + x;
  }

  void buildLocator() {
    const auto& v = dom_->vertices();
    lo_ = dom_->boundsLo();
    const Complex hi = dom_->boundsHi();
    side_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(tri_.triangles.size()))));
    cw_ = std::max((hi.real() - lo_.real()) / side_, 1e-300);
    ch_ = std::max((hi.imag() - lo_.imag()) / side_, 1e-300);
    buckets_.assign(static_cast<std::size_t>(side_) * side_, {});
    for (std::size_t t = 0; t < tri_.triangles.size(); ++t) {
      const auto& tr = tri_.triangles[t];
      double x0 = v[tr[0]].real(), x1 = x0, y0 = v[tr[0]].imag(), y1 = y0;
      for (int k = 1; k < 3; ++k) {
        x0 = std::min(x0, v[tr[k]].real()), x1 = std::max(x1, v[tr[k]].real());
        y0 = std::min(y0, v[tr[k]].imag()), y1 = std::max(y1, v[tr[k]].imag());
      }
      const std::size_t c0 = cellOf({x0, y0}), c1 = cellOf({x1, y1});
      const int cx0 = static_cast<int>(c0 % side_), cy0 = static_cast<int>(c0 / side_);
      const int cx1 = static_cast<int>(c1 % side_), cy1 = static_cast<int>(c1 / side_);
      for (int y = cy0; y <= cy1; ++y)
        for (int x = cx0; x <= cx1; ++x) buckets_[static_cast<std::size_t>(y) * side_ + x].push_back(static_cast<int>(t));
    }
  }

  std::shared_ptr<const PolygonDomain> dom_;
  double snap_tol_ = 0.0;
  Triangulation tri_;
  Complex lo_;
  int side_ = 1;
  double cw_ = 1, ch_ = 1;
  std::vector<std::vector<int>> buckets_;
};

namespace intrinsic_detail {

struct Portal {
  Complex left, right;
};

struct Apex {
  Complex point;
  double dist = 0.0;  // path length from the source to point
  int depth = 0;      // sleeve depth of the portal the apex was taken from
};

// Funnel pass from `start` through `portals` (depths start.depth+1, ...).
// With `end`, returns the apex before the final straight leg and sets *total.
inline Apex funnel(const Apex& start, const std::vector<Portal>& portals,
                   std::optional<Complex> end, double* total) {
  std::vector<Portal> p;
  p.reserve(portals.size() + 2);
  p.push_back({start.point, start.point});
  p.insert(p.end(), portals.begin(), portals.end());
  if (end) p.push_back({*end, *end});
  Complex apex = start.point, left = apex, right = apex;
  double dist = start.dist;
  int apex_i = 0, left_i = 0, right_i = 0;
  for (int i = 1; i < static_cast<int>(p.size()); ++i) {
    const Complex l = p[i].left, r = p[i].right;
    if (cross(right - apex, r - apex) >= 0) {
      if (apex == right || cross(left - apex, r - apex) < 0) {
        right = r;
        right_i = i;
      } else {
        dist += std::abs(left - apex);
        apex = left;
        apex_i = left_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
    if (cross(left - apex, l - apex) <= 0) {
      if (apex == left || cross(right - apex, l - apex) > 0) {
        left = l;
        left_i = i;
      } else {
        dist += std::abs(right - apex);
        apex = right;
        apex_i = right_i;
        right = left = apex;
        right_i = left_i = apex_i;
        i = apex_i;
        continue;
      }
    }
  }
  if (end && total) *total = dist + std::abs(*end - apex);
  return {apex, dist, start.depth + apex_i};
}

}  // namespace intrinsic_detail

// Single-source intrinsic distances. Holds a lazily filled per-triangle
// funnel cache; not safe for concurrent queries.
class IntrinsicField {
 public:
  IntrinsicField(std::shared_ptr<const VisibilityStructure> vs, Complex source)
      : vs_(std::move(vs)) {
    source_ = vs_->admit(source);
    const std::size_t m = vs_->triangleCount();
    parent_.assign(m, -1);
    depth_.assign(m, -1);
    entry_.resize(m);
    cache_.assign(m, std::nullopt);
    root_ = vs_->locate(source_);
    // Root the dual tree at the source triangle.
    const auto& tri = vs_->triangulation();
    const auto& v = vs_->domain().vertices();
    std::vector<int> stack{root_};
    depth_[root_] = 0;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        const int u = tri.neighbors[t][k];
        if (u < 0 || depth_[u] >= 0) continue;
        depth_[u] = depth_[t] + 1;
        parent_[u] = t;
        entry_[u] = {v[tri.triangles[t][(k + 1) % 3]], v[tri.triangles[t][k]]};
        stack.push_back(u);
      }
    }
    cache_[root_] = intrinsic_detail::Apex{source_, 0.0, 0};
  }

  Complex source() const { return source_; }

  double at(Complex w) const {
    const Complex p = vs_->admit(w);
    const int t = vs_->locate(p);
    const auto a = apexOf(t);
    double total = 0.0;
    intrinsic_detail::funnel(a, portalsAfter(t, a.depth), p, &total);
    return total;
  }

 private:
  std::vector<intrinsic_detail::Portal> portalsAfter(int t, int from_depth) const {
    std::vector<intrinsic_detail::Portal> out;
    for (int u = t; depth_[u] > from_depth; u = parent_[u]) out.push_back(entry_[u]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  intrinsic_detail::Apex apexOf(int t) const {
    if (cache_[t]) return *cache_[t];
    std::vector<int> chain;
    for (int u = t; !cache_[u]; u = parent_[u]) chain.push_back(u);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const auto& a = *cache_[parent_[*it]];
      cache_[*it] = intrinsic_detail::funnel(a, portalsAfter(*it, a.depth), std::nullopt, nullptr);
    }
    return *cache_[t];
  }

  std::shared_ptr<const VisibilityStructure> vs_;
  Complex source_;
  int root_ = 0;
  std::vector<int> parent_, depth_;
  std::vector<intrinsic_detail::Portal> entry_;
  mutable std::vector<std::optional<intrinsic_detail::Apex>> cache_;
};

inline double intrinsicDistance(const std::shared_ptr<const VisibilityStructure>& vs, Complex u,
                                Complex v) {
  return IntrinsicField(vs, u).at(v);
}

inline double intrinsicDistance(const PolygonDomain& dom, Complex u, Complex v) {
  return intrinsicDistance(std::make_shared<const VisibilityStructure>(dom), u, v);
}

// Image length of the radius from 0 to p, integrated in the depth variable.
// Length of f along a ray given as depth -> disk point, over depths [0, s].
// A coarse pass fixes the absolute tolerance so negligible tails stay unrefined.
template <typename Ray>
double rayImageLength(const ConformalMap& f, Ray&& ray, double s, double rel_tol = 1e-5) {
  if (s <= 0) return 0.0;
  auto g = [&](double d) { return std::abs(f.scaledDerivativeAt(ray(d))); };
  const double rough = adaptiveSimpson(g, 0.0, s, 1e-2, 40);
  return adaptiveSimpson(g, 0.0, s, rel_tol, 40, nullptr, 0.1 * rel_tol * rough);
}

inline double radialImageLength(const ConformalMap& f, const DiskPoint& p, double rel_tol = 1e-5) {
  return rayImageLength(
      f, [&](double d) { return DiskPoint{d, p.theta, p.fine * std::exp(d - p.s)}; }, p.s, rel_tol);
}

inline double radialImageLength(const ConformalMap& f, Complex omega, double r_max) {
  if (r_max < 0 || r_max >= 1) throw ParameterError("r_max must lie in [0, 1)");
  if (r_max == 0) return 0.0;
  return radialImageLength(f, DiskPoint{-std::log1p(-r_max), std::arg(omega), 0.0});
}

// Length of f along a polyline in the disk, with its quadrature error estimate.
inline double imageCurveLength(const ConformalMap& f, const std::vector<Complex>& curve,
                               double* error = nullptr) {
  for (const auto& z : curve)
    if (!(std::abs(z) < 1.0)) throw DomainError("curve leaves the unit disk");
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Complex a = curve[i], b = curve[i + 1];
    const double len = std::abs(b - a);
    if (len == 0) continue;
    double e = 0.0;
    total += len * adaptiveSimpson([&](double t) { return std::abs(f.deriv(a + t * (b - a))); },
                                   0.0, 1.0, 1e-5, 40, &e);
    err += len * e;
  }
  if (error) *error = err;
  return total;
}

// |f(x)|_I: intrinsic distance from f(x) to the image of the origin.
inline double intrinsicModulus(const ConformalMap& f, const IntrinsicField& from_origin,
                               const DiskPoint& x) {
  return from_origin.at(f.valueAt(x));
}

inline double intrinsicModulus(const ConformalMap& f, const PolygonDomain& dom, Complex x) {
  auto vs = std::make_shared<const VisibilityStructure>(dom, f.fitTolerance());
  return IntrinsicField(vs, f.eval(0.0)).at(f.eval(x));
}

// length(f([0, x])) / d_I(f(x), f(0)); 1 when x = 0.
inline double ghRatio(const ConformalMap& f, const IntrinsicField& from_origin, const DiskPoint& x) {
  const double d = intrinsicModulus(f, from_origin, x);
  const double len = radialImageLength(f, x);
  if (d == 0) return 1.0;
  return len / d;
}

inline double ghRatio(const ConformalMap& f, const PolygonDomain& dom, Complex x) {
  auto vs = std::make_shared<const VisibilityStructure>(dom, f.fitTolerance());
  return ghRatio(f, IntrinsicField(vs, f.eval(0.0)), DiskPoint::fromComplex(x));
}

// Largest pairwise intrinsic distance among the given image points.
inline double intrinsicDiameter(const std::shared_ptr<const VisibilityStructure>& vs,
                                const std::vector<Complex>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    IntrinsicField field(vs, points[i]);
    for (std::size_t j = i + 1; j < points.size(); ++j) best = std::max(best, field.at(points[j]));
  }
  return best;
}

}  // namespace holab
