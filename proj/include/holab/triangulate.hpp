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

// Ear-clipping triangulation of simple polygons.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"

namespace holab {

struct Triangulation {
  // Vertex indices into the polygon, counterclockwise.
  std::vector<std::array<int, 3>> triangles;
  // neighbors[t][k]: triangle across the edge (tri[k], tri[k+1]), or -1 on the boundary.
  std::vector<std::array<int, 3>> neighbors;
};

namespace tri_detail {

inline bool insideTriangle(Complex p, Complex a, Complex b, Complex c) {
  // Closed test: points on the edges count as inside.
  return cross(b - a, p - a) >= 0 && cross(c - b, p - b) >= 0 && cross(a - c, p - c) >= 0;
}

}  // namespace tri_detail

inline Triangulation triangulate(const PolygonDomain& dom) {
  const auto& v = dom.vertices();
  const int n = static_cast<int>(v.size());
  std::vector<int> prev(n), next(n);
  for (int i = 0; i < n; ++i) prev[i] = (i + n - 1) % n, next[i] = (i + 1) % n;
  std::vector<char> removed(n, 0);

  // Bucket grid over vertices for the ear emptiness test.
  const Complex lo = dom.boundsLo(), hi = dom.boundsHi();
  const int side = std::max(1, static_cast<int>(std::sqrt(n / 2.0)));
  const double cw = std::max((hi.real() - lo.real()) / side, 1e-300);
  const double ch = std::max((hi.imag() - lo.imag()) / side, 1e-300);
  auto cell = [&](Complex z) {
    const int x = std::clamp(static_cast<int>((z.real() - lo.real()) / cw), 0, side - 1);
    const int y = std::clamp(static_cast<int>((z.imag() - lo.imag()) / ch), 0, side - 1);
    return std::pair{x, y};
  };
  std::vector<std::vector<int>> buckets(side * side);
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = cell(v[i]);
    buckets[y * side + x].push_back(i);
  }

  auto convex = [&](int i) { return cross(v[i] - v[prev[i]], v[next[i]] - v[i]) > 0; };
  auto isEar = [&](int i) {
    if (!convex(i)) return false;
    const Complex a = v[prev[i]], b = v[i], c = v[next[i]];
    const auto [x0, y0] = cell({std::min({a.real(), b.real(), c.real()}), std::min({a.imag(), b.imag(), c.imag()})});
    const auto [x1, y1] = cell({std::max({a.real(), b.real(), c.real()}), std::max({a.imag(), b.imag(), c.imag()})});
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        for (int k : buckets[y * side + x]) {
          if (removed[k] || k == i || k == prev[i] || k == next[i]) continue;
          // Coincident positions belong to other chain vertices; they block the ear too.
          if (tri_detail::insideTriangle(v[k], a, b, c)) {
            // A reflex neighbor on the ear's edge does not block it.
            if (v[k] == a || v[k] == c) continue;
            return false;
          }
        }
    return true;
  };

  Triangulation out;
  out.triangles.reserve(n - 2);
  int remaining = n;
  int cur = 0;
  int misses = 0;
  while (remaining > 3) {
    if (isEar(cur)) {
      out.triangles.push_back({prev[cur], cur, next[cur]});
      removed[cur] = 1;
      next[prev[cur]] = next[cur];
      prev[next[cur]] = prev[cur];
      --remaining;
      cur = prev[cur];
      misses = 0;
      continue;
    }
    cur = next[cur];
    if (++misses > remaining) {
      // Only degenerate ears are left (collinear runs); clip one with zero area.
      int pick = -1;
      for (int i = cur, k = 0; k < remaining; ++k, i = next[i])
        if (cross(v[i] - v[prev[i]], v[next[i]] - v[i]) >= 0) {
          pick = i;
          break;
        }
      if (pick < 0) throw ConstructionError("triangulation failed: no ear found");
      cur = pick;
      out.triangles.push_back({prev[cur], cur, next[cur]});
      removed[cur] = 1;
      next[prev[cur]] = next[cur];
      prev[next[cur]] = prev[cur];
      --remaining;
      cur = prev[cur];
      misses = 0;
    }
  }
  out.triangles.push_back({prev[cur], cur, next[cur]});

  // Adjacency through shared diagonals.
  const std::size_t m = out.triangles.size();
  out.neighbors.assign(m, {-1, -1, -1});
  std::vector<std::pair<long long, int>> edges;
  edges.reserve(3 * m);
  for (std::size_t t = 0; t < m; ++t)
    for (int k = 0; k < 3; ++k) {
      const int a = out.triangles[t][k], b = out.triangles[t][(k + 1) % 3];
      const long long key = static_cast<long long>(std::min(a, b)) * n + std::max(a, b);
      edges.push_back({key, static_cast<int>(3 * t + k)});
    }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i].first != edges[i + 1].first) continue;
    const int p = edges[i].second, q = edges[i + 1].second;
    out.neighbors[p / 3][p % 3] = q / 3;
    out.neighbors[q / 3][q % 3] = p / 3;
    ++i;
  }
  return out;
}

}  // namespace holab
