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

// Simply connected planar domains bounded by a closed polygonal chain.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/errors.hpp"
#include "holab/numerics.hpp"

namespace holab {

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

// Closest point to z on the segment [a, b].
inline Complex closestOnSegment(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(z - a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

inline double segmentDistance(Complex z, Complex a, Complex b) {
  const Complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(z - a);
  const double t = dot(z - a, d) / len2;
  if (t <= 0.0) return std::abs(z - a);
  if (t >= 1.0) return std::abs(z - b);
  // Perpendicular distance keeps relative accuracy on long edges.
  return std::abs(cross(z - a, d)) / std::sqrt(len2);
}

// True if the closed segments [p1,p2] and [q1,q2] share a point.
inline bool segmentsIntersect(Complex p1, Complex p2, Complex q1, Complex q2) {
  auto orient = [](Complex a, Complex b, Complex c) {
    const double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
  };
  auto onSeg = [](Complex a, Complex b, Complex c) {
    return std::min(a.real(), b.real()) <= c.real() && c.real() <= std::max(a.real(), b.real()) &&
           std::min(a.imag(), b.imag()) <= c.imag() && c.imag() <= std::max(a.imag(), b.imag());
  };
  const int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  const int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && onSeg(p1, p2, q1)) return true;
  if (o2 == 0 && onSeg(p1, p2, q2)) return true;
  if (o3 == 0 && onSeg(q1, q2, p1)) return true;
  if (o4 == 0 && onSeg(q1, q2, p2)) return true;
  return false;
}

// True if the open segments cross at a single interior point of both.
inline bool segmentsCrossProperly(Complex p1, Complex p2, Complex q1, Complex q2) {
  const double d1 = cross(p2 - p1, q1 - p1), d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1), d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

inline double signedArea(const std::vector<Complex>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * a;
}

// Uniform bucket grid over polygon edges.
class EdgeGrid {
 public:
  EdgeGrid() = default;

  explicit EdgeGrid(const std::vector<Complex>& verts) {
    const std::size_t n = verts.size();
    lo_ = hi_ = verts[0];
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lo_ = {std::min(lo_.real(), verts[i].real()), std::min(lo_.imag(), verts[i].imag())};
      hi_ = {std::max(hi_.real(), verts[i].real()), std::max(hi_.imag(), verts[i].imag())};
      total += std::abs(verts[(i + 1) % n] - verts[i]);
    }
    const double w = hi_.real() - lo_.real(), h = hi_.imag() - lo_.imag();
    // Aim for a few edges per occupied cell, with at most ~16n cells.
    double cell = std::max(2.0 * total / n, std::sqrt(w * h / (16.0 * n)));
    cell = std::max(cell, 1e-12 * std::max(w, h));
    cell_ = cell;
    nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(w / cell)) + 1);
    ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h / cell)) + 1);
    buckets_.assign(nx_ * ny_, {});
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = verts[i], b = verts[(i + 1) % n];
      const auto [x0, y0] = cellOf({std::min(a.real(), b.real()), std::min(a.imag(), b.imag())});
      const auto [x1, y1] = cellOf({std::max(a.real(), b.real()), std::max(a.imag(), b.imag())});
      for (std::size_t y = y0; y <= y1; ++y)
        for (std::size_t x = x0; x <= x1; ++x) buckets_[y * nx_ + x].push_back(static_cast<int>(i));
    }
  }

  std::pair<std::size_t, std::size_t> cellOf(Complex z) const {
    auto clampIdx = [](double v, std::size_t n) {
      if (!(v > 0)) return std::size_t{0};
      return std::min(static_cast<std::size_t>(v), n - 1);
    };
    return {clampIdx((z.real() - lo_.real()) / cell_, nx_), clampIdx((z.imag() - lo_.imag()) / cell_, ny_)};
  }

  const std::vector<int>& bucket(std::size_t x, std::size_t y) const { return buckets_[y * nx_ + x]; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double cell() const { return cell_; }
  Complex lo() const { return lo_; }
  Complex hi() const { return hi_; }

  // Edge ids whose buckets meet the axis-aligned box [a, b].
  std::vector<int> edgesInBox(Complex a, Complex b) const {
    const auto [x0, y0] = cellOf({std::min(a.real(), b.real()), std::min(a.imag(), b.imag())});
    const auto [x1, y1] = cellOf({std::max(a.real(), b.real()), std::max(a.imag(), b.imag())});
    std::vector<int> out;
    for (std::size_t y = y0; y <= y1; ++y)
      for (std::size_t x = x0; x <= x1; ++x) {
        const auto& bk = buckets_[y * nx_ + x];
        out.insert(out.end(), bk.begin(), bk.end());
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Edge ids whose buckets meet the segment [a, b].
  std::vector<int> edgesNearSegment(Complex a, Complex b) const {
    const double len = std::abs(b - a);
    if (len <= 4.0 * cell_) return edgesInBox(a, b);
    std::vector<int> out;
    const int steps = static_cast<int>(std::ceil(len / (0.5 * cell_)));
    std::size_t last = std::numeric_limits<std::size_t>::max();
    for (int s = 0; s <= steps; ++s) {
      const auto [cx, cy] = cellOf(a + (b - a) * (static_cast<double>(s) / steps));
      if (cy * nx_ + cx == last) continue;
      last = cy * nx_ + cx;
      for (std::size_t y = cy > 0 ? cy - 1 : 0; y <= std::min(cy + 1, ny_ - 1); ++y)
        for (std::size_t x = cx > 0 ? cx - 1 : 0; x <= std::min(cx + 1, nx_ - 1); ++x) {
          const auto& bk = buckets_[y * nx_ + x];
          out.insert(out.end(), bk.begin(), bk.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  Complex lo_, hi_;
  double cell_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

class PolygonDomain {
 public:
  PolygonDomain() = default;

  // Validates and normalizes to positive orientation. Throws
  // ConstructionError for fewer than 3 vertices, repeated consecutive
  // vertices, self-intersection, or a basepoint not strictly inside.
  static PolygonDomain create(std::vector<Complex> vertices, Complex basepoint) {
    if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
    if (vertices.size() < 3) throw ConstructionError("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!std::isfinite(vertices[i].real()) || !std::isfinite(vertices[i].imag()))
        throw ConstructionError("polygon vertex is not finite");
      if (vertices[i] == vertices[(i + 1) % vertices.size()])
        throw ConstructionError("polygon has repeated consecutive vertices");
    }
    if (signedArea(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
    PolygonDomain dom;
    dom.vertices_ = std::move(vertices);
    dom.grid_ = EdgeGrid(dom.vertices_);
    dom.scale_ = std::max(std::abs(dom.grid_.hi() - dom.grid_.lo()), 1e-300);
    dom.checkSimple();
    dom.basepoint_ = basepoint;
    bool inside = false;
    try {
      inside = dom.contains(basepoint);
    } catch (const AmbiguousPositionError&) {
      inside = false;
    }
    if (!inside) throw ConstructionError("basepoint is not strictly inside the polygon");
    return dom;
  }

  const std::vector<Complex>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Complex vertex(std::size_t i) const { return vertices_[i % vertices_.size()]; }
  Complex basepoint() const { return basepoint_; }
  double area() const { return signedArea(vertices_); }
  Complex boundsLo() const { return grid_.lo(); }
  Complex boundsHi() const { return grid_.hi(); }
  double scale() const { return scale_; }
  const EdgeGrid& grid() const { return grid_; }

  // Distance below which a point counts as lying on the chain.
  double boundaryTolerance() const { return 1e-12 * std::max(1.0, scale_); }
  double boundaryTolerance(Complex z) const { return 1e-12 * std::max(1.0, std::abs(z)); }

  // Maximum deviation between the chain and the curve it samples, when
  // the polygon discretizes a smooth boundary (0 for exact polygons).
  double chordTolerance() const { return chord_tolerance_; }
  void setChordTolerance(double tol) { chord_tolerance_ = tol; }

  // Winding-number containment. Throws AmbiguousPositionError within
  // boundaryTolerance() of the chain.
  bool contains(Complex z) const {
    if (unsignedBoundaryDistance(z) <= boundaryTolerance(z))
      throw AmbiguousPositionError("point lies on the polygon boundary");
    return rawContains(z);
  }

  // Containment without the on-boundary check (points on edges may go either way).
  bool rawContains(Complex z) const {
    if (z.real() < grid_.lo().real() || z.real() > grid_.hi().real() ||
        z.imag() < grid_.lo().imag() || z.imag() > grid_.hi().imag())
      return false;
    const auto [cx, cy] = grid_.cellOf(z);
    int winding = 0;
    for (std::size_t x = cx; x < grid_.nx(); ++x) {
      for (int e : grid_.bucket(x, cy)) {
        const Complex a = vertices_[e], b = vertices_[(e + 1) % vertices_.size()];
        const bool up = a.imag() <= z.imag() && b.imag() > z.imag();
        const bool down = a.imag() > z.imag() && b.imag() <= z.imag();
        if (!up && !down) continue;
        const double t = (z.imag() - a.imag()) / (b.imag() - a.imag());
        const double xi = a.real() + t * (b.real() - a.real());
        if (xi <= z.real()) continue;
        // Count each crossing once, in the bucket that holds it.
        const std::size_t home = std::max(grid_.cellOf({xi, z.imag()}).first, cx);
        if (home != x) continue;
        winding += up ? 1 : -1;
      }
    }
    return winding != 0;
  }

  // Sorted abscissae where the horizontal line at height y crosses the chain
  // (half-open rule, matching rawContains). Inside intervals are [x0,x1], [x2,x3], ...
  std::vector<double> rowCrossings(double y) const {
    std::vector<double> xs;
    if (y < grid_.lo().imag() || y > grid_.hi().imag()) return xs;
    const std::size_t cy = grid_.cellOf({grid_.lo().real(), y}).second;
    std::vector<int> ids;
    for (std::size_t x = 0; x < grid_.nx(); ++x) {
      const auto& bk = grid_.bucket(x, cy);
      ids.insert(ids.end(), bk.begin(), bk.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int e : ids) {
      const Complex a = vertices_[e], b = vertices_[(e + 1) % vertices_.size()];
      const bool up = a.imag() <= y && b.imag() > y;
      const bool down = a.imag() > y && b.imag() <= y;
      if (!up && !down) continue;
      const double t = (y - a.imag()) / (b.imag() - a.imag());
      xs.push_back(a.real() + t * (b.real() - a.real()));
    }
    std::sort(xs.begin(), xs.end());
    return xs;
  }

  // Euclidean distance to the chain, for any point.
  double unsignedBoundaryDistance(Complex z) const { return nearestEdge(z).second; }

  Complex nearestBoundaryPoint(Complex z) const {
    const int e = nearestEdge(z).first;
    return closestOnSegment(z, vertices_[e], vertices_[(e + 1) % vertices_.size()]);
  }

  int nearestEdgeIndex(Complex z) const { return nearestEdge(z).first; }

  // Distance from an interior point to the boundary chain.
  double distanceToBoundary(Complex z) const {
    const double d = unsignedBoundaryDistance(z);
    if (d <= boundaryTolerance(z)) throw PositionError("point lies on the polygon boundary");
    if (!rawContains(z)) throw PositionError("point lies outside the polygon");
    return d;
  }

  // True if the open segment (a, b) avoids the chain except for touching
  // at points, and a, b are inside or on the closed domain.
  bool segmentInside(Complex a, Complex b) const {
    const auto& v = vertices_;
    const std::size_t n = v.size();
    for (int e : grid_.edgesNearSegment(a, b)) {
      const Complex p = v[e], q = v[(e + 1) % n];
      if (segmentsCrossProperly(a, b, p, q)) return false;
    }
    // Collinear overlaps and vertex touches are admitted; decide by samples.
    for (double t : {0.5, 0.25, 0.75}) {
      const Complex m = a + (b - a) * t;
      if (unsignedBoundaryDistance(m) > boundaryTolerance() && !rawContains(m)) return false;
    }
    // A vertex strictly inside the segment may let it exit through a reflex corner.
    for (int e : grid_.edgesNearSegment(a, b)) {
      const Complex p = v[e];
      if (segmentDistance(p, a, b) > boundaryTolerance() || p == a || p == b) continue;
      const Complex prev = v[(e + n - 1) % n], next = v[(e + 1) % n];
      const Complex d = b - a;
      const double sp = cross(d, prev - p), sn = cross(d, next - p);
      if ((sp > 0 && sn < 0) || (sp < 0 && sn > 0)) return false;
    }
    return true;
  }

  // Moves a point that lies within `tol` outside (or on) the chain to the
  // nearest chain point pushed slightly inward. Interior points are returned unchanged.
  Complex snapInside(Complex z, double tol) const {
    const auto [e, d] = nearestEdge(z);
    if (d > boundaryTolerance(z) && rawContains(z)) return z;
    if (d > tol) throw PositionError("point lies outside the polygon");
    const Complex a = vertices_[e], b = vertices_[(e + 1) % vertices_.size()];
    const Complex p = closestOnSegment(z, a, b);
    const Complex normal = Complex(0, 1) * (b - a) / std::abs(b - a);  // inward for CCW chains
    const double base = boundaryTolerance(p);
    for (double push = 2 * base; push < 1e3 * std::max(tol, base); push *= 4) {
      const Complex c = p + normal * push;
      if (unsignedBoundaryDistance(c) > boundaryTolerance(c) && rawContains(c)) return c;
    }
    throw PositionError("cannot move point inside the polygon");
  }

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : vertices_) j["vertices"].push_back({v.real(), v.imag()});
    j["basepoint"] = {basepoint_.real(), basepoint_.imag()};
    return j;
  }

  static PolygonDomain fromJson(const nlohmann::json& j) {
    try {
      if (!j.is_object() || !j.contains("vertices") || !j.contains("basepoint"))
        throw FormatError("polygon JSON needs \"vertices\" and \"basepoint\"");
      std::vector<Complex> verts;
      for (const auto& p : j.at("vertices")) {
        if (!p.is_array() || p.size() != 2) throw FormatError("vertex must be [x, y]");
        verts.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      const auto& b = j.at("basepoint");
      if (!b.is_array() || b.size() != 2) throw FormatError("basepoint must be [x, y]");
      if (verts.size() < 3) throw FormatError("polygon file needs at least 3 vertices");
      return create(std::move(verts), {b[0].get<double>(), b[1].get<double>()});
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed polygon JSON: ") + e.what());
    }
  }

 private:
  std::pair<int, double> nearestEdge(Complex z) const {
    const auto& v = vertices_;
    const std::size_t n = v.size();
    const auto [cx, cy] = grid_.cellOf(z);
    // Distance from z to the grid box, so rings start where edges can be.
    const double ox = std::max({grid_.lo().real() - z.real(), 0.0, z.real() - grid_.hi().real()});
    const double oy = std::max({grid_.lo().imag() - z.imag(), 0.0, z.imag() - grid_.hi().imag()});
    const double outside = std::hypot(ox, oy);
    int best = -1;
    double best_d = INFINITY;
    const std::size_t max_ring = std::max(grid_.nx(), grid_.ny());
    for (std::size_t r = 0; r <= max_ring; ++r) {
      const long x0 = static_cast<long>(cx) - static_cast<long>(r), x1 = static_cast<long>(cx + r);
      const long y0 = static_cast<long>(cy) - static_cast<long>(r), y1 = static_cast<long>(cy + r);
      for (long y = y0; y <= y1; ++y) {
        if (y < 0 || y >= static_cast<long>(grid_.ny())) continue;
        for (long x = x0; x <= x1; ++x) {
          if (x < 0 || x >= static_cast<long>(grid_.nx())) continue;
          if (y != y0 && y != y1 && x != x0 && x != x1) continue;
          for (int e : grid_.bucket(x, y)) {
            const double d = segmentDistance(z, v[e], v[(e + 1) % n]);
            if (d < best_d) best_d = d, best = e;
          }
        }
      }
      // Every unvisited cell is at least r * cell away from z's cell.
      if (best >= 0 && best_d <= std::max(outside, r * grid_.cell())) break;
    }
    return {best, best_d};
  }

  void checkSimple() const {
    const auto& v = vertices_;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Complex a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
      // Consecutive edges folding back onto each other.
      if (std::abs(cross(b - a, c - b)) <= 1e-15 * std::abs(b - a) * std::abs(c - b) &&
          dot(b - a, c - b) < 0)
        throw ConstructionError("polygon chain folds back on itself");
      for (int j : grid_.edgesInBox(a, b)) {
        const std::size_t jj = static_cast<std::size_t>(j);
        if (jj <= i) continue;
        if (jj == (i + 1) % n || (jj + 1) % n == i) continue;
        if (segmentsIntersect(a, b, v[jj], v[(jj + 1) % n]))
          throw ConstructionError("polygon chain is not simple");
      }
    }
  }

  std::vector<Complex> vertices_;
  Complex basepoint_;
  EdgeGrid grid_;
  double scale_ = 1.0;
  double chord_tolerance_ = 0.0;
};

inline PolygonDomain loadPolygon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open polygon file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed polygon JSON: ") + e.what());
  }
  return PolygonDomain::fromJson(j);
}

inline void savePolygon(const PolygonDomain& dom, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write polygon file: " + path);
  out.precision(17);
  out << dom.toJson().dump(2) << '\n';
  if (!out) throw IoError("failed writing polygon file: " + path);
}

// Regular n-gon inscribed in the circle |z - center| = radius.
inline PolygonDomain regularPolygon(std::size_t n, double radius = 1.0, Complex center = 0.0) {
  std::vector<Complex> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(center + std::polar(radius, kTwoPi * k / n));
  return PolygonDomain::create(std::move(v), center);
}

inline PolygonDomain unitSquare() {
  return PolygonDomain::create({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {0.5, 0.5});
}

inline PolygonDomain lShape() {
  return PolygonDomain::create({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, {0.5, 0.5});
}

}  // namespace holab
