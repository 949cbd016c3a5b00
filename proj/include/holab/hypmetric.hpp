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

// Hyperbolic distance on the disk and lattice quasi-hyperbolic distance.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "holab/conformal.hpp"
#include "holab/diskpoint.hpp"
#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"

namespace holab {

// 2 artanh |(x - y) / (1 - conj(x) y)|.
inline double hyperbolicDistanceDisk(Complex x, Complex y) {
  if (!(std::abs(x) < 1.0) || !(std::abs(y) < 1.0))
    throw DomainError("hyperbolic distance needs points in the open unit disk");
  const double t = std::abs((x - y) / (1.0 - std::conj(x) * y));
  return 2.0 * std::atanh(std::min(t, 1.0 - 1e-17));
}

// Deep pairs use the half-plane model at the boundary, accurate to O(1 - |x|).
inline double hyperbolicDistanceDeep(const DiskPoint& x, const DiskPoint& y) {
  if (x.shallow() && y.shallow()) return hyperbolicDistanceDisk(x.toComplex(), y.toComplex());
  const double s0 = std::min(x.s, y.s);
  const double ex = std::exp(s0 - x.s), ey = std::exp(s0 - y.s);
  const double dtheta = wrapAngle(x.theta - y.theta);
  const double across = (dtheta == 0.0 ? 0.0 : dtheta * std::exp(s0)) + ex * x.fine - ey * y.fine;
  return 2.0 * std::asinh(std::hypot(across, ex - ey) / (2.0 * std::sqrt(ex * ey)));
}

class QhGraph;

// Single-source shortest-path distances in a QhGraph.
class QhField {
 public:
  // Quasi-hyperbolic distance from the source to v.
  double at(Complex v) const;
  double source_distance_to_lattice(std::size_t node) const { return dist_[node]; }

 private:
  friend class QhGraph;
  const QhGraph* graph_ = nullptr;
  Complex source_;
  double source_d_ = 0.0;
  std::vector<double> dist_;
};

// 8-neighbor square lattice clipped to the domain. Edge weight is
// length / min(endpoint boundary distances).
class QhGraph {
 public:
  static QhGraph build(const PolygonDomain& dom, double h) {
    if (!(h > 0.0)) throw ParameterError("lattice spacing must be positive");
    QhGraph g;
    g.dom_ = &dom;
    g.h_ = h;
    const Complex lo = dom.boundsLo(), hi = dom.boundsHi();
    g.origin_ = lo + Complex(h / 2, h / 2);
    g.nx_ = static_cast<std::size_t>(std::floor((hi.real() - lo.real()) / h)) + 1;
    g.ny_ = static_cast<std::size_t>(std::floor((hi.imag() - lo.imag()) / h)) + 1;
    if (static_cast<double>(g.nx_) * static_cast<double>(g.ny_) > 4e8)
      throw ResolutionError("lattice spacing too fine for this domain");
    g.index_.assign(g.nx_ * g.ny_, -1);
    for (std::size_t j = 0; j < g.ny_; ++j) {
      const double y = g.origin_.imag() + h * j;
      const auto xs = dom.rowCrossings(y);
      for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
        const long i0 = std::max(0L, static_cast<long>(std::ceil((xs[k] - g.origin_.real()) / h)));
        const long i1 = std::min(static_cast<long>(g.nx_) - 1,
                                 static_cast<long>(std::floor((xs[k + 1] - g.origin_.real()) / h)));
        for (long i = i0; i <= i1; ++i) {
          const Complex z = g.position(i, j);
          const double d = dom.unsignedBoundaryDistance(z);
          if (d <= dom.boundaryTolerance(z)) continue;
          g.index_[j * g.nx_ + i] = static_cast<int>(g.nodes_.size());
          g.nodes_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), d, 0});
        }
      }
    }
    if (g.nodes_.empty()) throw ResolutionError("lattice spacing leaves no interior nodes");
    // Edges: the segment is certainly inside when an endpoint's boundary disk covers it.
    for (auto& n : g.nodes_) {
      for (int k = 0; k < 8; ++k) {
        const int m = g.neighbor(n, k);
        if (m < 0) continue;
        const auto& o = g.nodes_[m];
        const double len = kOffsets[k].len * h;
        if (std::max(n.d, o.d) > len || dom.segmentInside(g.position(n.i, n.j), g.position(o.i, o.j)))
          n.mask |= static_cast<std::uint8_t>(1u << k);
      }
    }
    g.keepLargestComponent();
    return g;
  }

  double spacing() const { return h_; }
  std::size_t nodeCount() const { return nodes_.size(); }
  std::size_t droppedNodes() const { return dropped_; }
  const PolygonDomain& domain() const { return *dom_; }

  // Distances from u, attached to lattice nodes within 2h.
  QhField distancesFrom(Complex u) const {
    QhField f;
    f.graph_ = this;
    f.source_ = u;
    f.source_d_ = dom_->distanceToBoundary(u);
    f.dist_.assign(nodes_.size(), INFINITY);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    bool attached = false;
    for (int m : attachments(u, f.source_d_)) {
      const double w = std::abs(u - nodePosition(m)) / std::min(f.source_d_, nodes_[m].d);
      if (w < f.dist_[m]) {
        f.dist_[m] = w;
        pq.push({w, m});
        attached = true;
      }
    }
    if (!attached) throw ResolutionError("query point has no lattice neighbors inside the domain");
    while (!pq.empty()) {
      const auto [du, a] = pq.top();
      pq.pop();
      if (du > f.dist_[a]) continue;
      const auto& n = nodes_[a];
      for (int k = 0; k < 8; ++k) {
        if (!(n.mask & (1u << k))) continue;
        const int b = neighbor(n, k);
        const double nd = du + kOffsets[k].len * h_ / std::min(n.d, nodes_[b].d);
        if (nd < f.dist_[b]) {
          f.dist_[b] = nd;
          pq.push({nd, b});
        }
      }
    }
    return f;
  }

  double distance(Complex u, Complex v) const {
    if (u == v) return 0.0;
    return distancesFrom(u).at(v);
  }

 private:
  friend class QhField;

  struct Node {
    std::uint32_t i, j;
    double d;
    std::uint8_t mask;
  };
  struct Offset {
    int di, dj;
    double len;
  };
  static constexpr double kDiag = 1.4142135623730951;
  static constexpr std::array<Offset, 8> kOffsets{{{1, 0, 1.0},
                                                    {1, 1, kDiag},
                                                    {0, 1, 1.0},
                                                    {-1, 1, kDiag},
                                                    {-1, 0, 1.0},
                                                    {-1, -1, kDiag},
                                                    {0, -1, 1.0},
                                                    {1, -1, kDiag}}};

  Complex position(long i, long j) const { return origin_ + Complex(h_ * i, h_ * j); }
  Complex nodePosition(int m) const { return position(nodes_[m].i, nodes_[m].j); }

  int indexAt(long i, long j) const {
    if (i < 0 || j < 0 || i >= static_cast<long>(nx_) || j >= static_cast<long>(ny_)) return -1;
    return index_[j * nx_ + i];
  }

  int neighbor(const Node& n, int k) const {
    return indexAt(static_cast<long>(n.i) + kOffsets[k].di, static_cast<long>(n.j) + kOffsets[k].dj);
  }

  // Lattice nodes within 2h of z joined to z by a segment inside the domain.
  std::vector<int> attachments(Complex z, double dz) const {
    std::vector<int> out;
    const long ci = static_cast<long>(std::floor((z.real() - origin_.real()) / h_));
    const long cj = static_cast<long>(std::floor((z.imag() - origin_.imag()) / h_));
    for (long j = cj - 2; j <= cj + 3; ++j)
      for (long i = ci - 2; i <= ci + 3; ++i) {
        const int m = indexAt(i, j);
        if (m < 0) continue;
        const double len = std::abs(nodePosition(m) - z);
        if (len > 2.0 * h_) continue;
        if (std::max(dz, nodes_[m].d) > len || dom_->segmentInside(z, nodePosition(m))) out.push_back(m);
      }
    return out;
  }

  void keepLargestComponent() {
    std::vector<int> comp(nodes_.size(), -1);
    std::vector<std::size_t> sizes;
    std::vector<int> stack;
    for (std::size_t s = 0; s < nodes_.size(); ++s) {
      if (comp[s] >= 0) continue;
      const int c = static_cast<int>(sizes.size());
      sizes.push_back(0);
      stack.push_back(static_cast<int>(s));
      comp[s] = c;
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        ++sizes[c];
        for (int k = 0; k < 8; ++k) {
          if (!(nodes_[a].mask & (1u << k))) continue;
          const int b = neighbor(nodes_[a], k);
          if (comp[b] < 0) comp[b] = c, stack.push_back(b);
        }
      }
    }
    const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    // Isolated pockets in sharp corners are tolerated; a split domain is not.
    if (sizes[keep] < 0.95 * nodes_.size())
      throw ResolutionError("lattice graph is disconnected; spacing too coarse for the domain");
    std::vector<Node> kept;
    std::vector<int> remap(nodes_.size(), -1);
    for (std::size_t s = 0; s < nodes_.size(); ++s)
      if (comp[s] == keep) remap[s] = static_cast<int>(kept.size()), kept.push_back(nodes_[s]);
    dropped_ = nodes_.size() - kept.size();
    for (auto& idx : index_)
      if (idx >= 0) idx = remap[idx];
    nodes_ = std::move(kept);
  }

  const PolygonDomain* dom_ = nullptr;
  double h_ = 0.0;
  Complex origin_;
  std::size_t nx_ = 0, ny_ = 0;
  std::vector<int> index_;
  std::vector<Node> nodes_;
  std::size_t dropped_ = 0;
};

inline double QhField::at(Complex v) const {
  if (v == source_) return 0.0;
  const auto& g = *graph_;
  const double dv = g.dom_->distanceToBoundary(v);
  double best = INFINITY;
  for (int m : g.attachments(v, dv))
    best = std::min(best, dist_[m] + std::abs(v - g.nodePosition(m)) / std::min(dv, g.nodes_[m].d));
  // Direct hop for nearby pairs.
  const double len = std::abs(v - source_);
  if (len <= 2.0 * g.h_ && (std::max(dv, source_d_) > len || g.dom_->segmentInside(source_, v)))
    best = std::min(best, len / std::min(dv, source_d_));
  if (!std::isfinite(best)) throw ResolutionError("point is unreachable in the lattice graph");
  return best;
}

inline double quasiHyperbolicDistance(const QhGraph& g, Complex u, Complex v) { return g.distance(u, v); }

struct QhConvergence {
  std::vector<double> spacings;
  std::vector<double> distances;
  double last_change = 0.0;  // relative change between the two finest levels
  bool converged = false;
};

inline QhConvergence qhConvergenceDiagnostic(const PolygonDomain& dom, Complex u, Complex v,
                                             std::span<const double> spacings, double tol = 0.05) {
  if (spacings.size() < 2) throw ParameterError("need at least two spacings");
  for (std::size_t i = 1; i < spacings.size(); ++i)
    if (!(spacings[i] < spacings[i - 1])) throw ParameterError("spacings must decrease");
  QhConvergence out;
  for (double h : spacings) {
    out.spacings.push_back(h);
    out.distances.push_back(u == v ? 0.0 : QhGraph::build(dom, h).distance(u, v));
  }
  const double a = out.distances[out.distances.size() - 2], b = out.distances.back();
  out.last_change = (a == b) ? 0.0 : std::abs(b - a) / std::max(std::abs(a), std::abs(b));
  out.converged = out.last_change <= tol;
  return out;
}

// Band of log(1/(1-|f^{-1}(u)|)) / (1 + k(basepoint, u)) over sample points with k >= 1.
struct QuasiInvarianceBand {
  double min_ratio = INFINITY;
  double max_ratio = 0.0;
  std::size_t samples = 0;
  double A() const { return samples ? std::max(max_ratio, 1.0 / min_ratio) : 1.0; }
};

inline QuasiInvarianceBand hyperbolicQuasiInvariance(const ConformalMap& f, const QhField& from_base,
                                                     std::span<const Complex> points) {
  QuasiInvarianceBand band;
  for (Complex u : points) {
    const double k = from_base.at(u);
    if (k < 1.0) continue;
    const double depth = f.preimageAt(u).s;
    const double ratio = depth / (1.0 + k);
    band.min_ratio = std::min(band.min_ratio, ratio);
    band.max_ratio = std::max(band.max_ratio, ratio);
    ++band.samples;
  }
  return band;
}

}  // namespace holab
