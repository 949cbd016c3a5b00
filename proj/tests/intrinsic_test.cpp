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

#include "holab/intrinsic.hpp"
#include "holab/maps.hpp"
#include "holab/spiral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <queue>
#include <random>

namespace holab {
namespace {

// Closed-domain visibility: grazing the chain is allowed.
bool visible(const PolygonDomain& dom, Complex a, Complex b) {
  try {
    return dom.segmentInside(a, b);
  } catch (const AmbiguousPositionError&) {
    return true;
  }
}

// Dijkstra over a 16-neighbor lattice restricted to visible segments.
double latticeOracle(const PolygonDomain& dom, Complex u, Complex v, double h) {
  const Complex lo = dom.boundsLo(), hi = dom.boundsHi();
  const int nx = static_cast<int>((hi.real() - lo.real()) / h) + 1;
  const int ny = static_cast<int>((hi.imag() - lo.imag()) / h) + 1;
  std::vector<Complex> pts{u, v};
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const Complex z = lo + Complex(i * h, j * h);
      if (dom.rawContains(z) && dom.unsignedBoundaryDistance(z) > 1e-9) pts.push_back(z);
    }
  std::vector<double> dist(pts.size(), INFINITY);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[0] = 0;
  pq.push({0, 0});
  while (!pq.empty()) {
    const auto [d, i] = pq.top();
    pq.pop();
    if (d > dist[i]) continue;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double len = std::abs(pts[k] - pts[i]);
      if (k == i || len > 2.3 * h || d + len >= dist[k]) continue;
      if (!visible(dom, pts[i], pts[k])) continue;
      dist[k] = d + len;
      pq.push({dist[k], k});
    }
    if (visible(dom, pts[i], v) && d + std::abs(v - pts[i]) < dist[1]) {
      dist[1] = d + std::abs(v - pts[i]);
      pq.push({dist[1], 1});
    }
  }
  return dist[1];
}

TEST(IntrinsicDistanceTest, ConvexSquare) {
  EXPECT_NEAR(intrinsicDistance(unitSquare(), {0.2, 0.2}, {0.8, 0.8}), 0.6 * std::sqrt(2.0), 1e-12);
}

TEST(IntrinsicDistanceTest, LShapeBendsAtReflexVertex) {
  const double d = intrinsicDistance(lShape(), {1.5, 0.5}, {0.5, 1.5});
  EXPECT_NEAR(d, 2 * std::sqrt(0.5), 1e-12);
  const double oracle = latticeOracle(lShape(), {1.5, 0.5}, {0.5, 1.5}, 0.05);
  EXPECT_GE(oracle, d - 1e-9);
  EXPECT_NEAR(oracle, d, 0.05 * d);
}

TEST(IntrinsicDistanceTest, EqualPointsGiveZero) {
  EXPECT_EQ(intrinsicDistance(lShape(), {0.3, 1.7}, {0.3, 1.7}), 0.0);
}

TEST(IntrinsicDistanceTest, PointOutsideThrows) {
  EXPECT_THROW(intrinsicDistance(lShape(), {1.5, 1.5}, {0.5, 0.5}), PositionError);
}

TEST(IntrinsicDistanceTest, KoebeSlitGoesAroundTip) {
  const auto k = namedMap("koebe");
  const Complex u(-1, 0.1), v(-1, -0.1);
  EXPECT_NEAR(intrinsicDistance(k.polygon, u, v), std::abs(u + 0.25) + std::abs(v + 0.25), 1e-6);
  EXPECT_NEAR(intrinsicDistance(k.polygon, 0.0, {-2, 0.5}), std::abs(Complex(-2, 0.5)), 1e-9);
}

TEST(IntrinsicDistanceTest, MatchesLatticeOracleOnSpiral) {
  const auto s = buildSpiralDomain({.alpha = 0.0, .loops = 3, .samples_per_loop = 32});
  const Complex u = s.polygon.basepoint(), v = s.loop_centers.back();
  const double d = intrinsicDistance(s.polygon, u, v);
  const double oracle = latticeOracle(s.polygon, u, v, s.minChannelWidth() / 8);
  EXPECT_GE(oracle, d - 1e-9);
  EXPECT_NEAR(oracle, d, 0.05 * d);
}

class IntrinsicMetricTest : public ::testing::TestWithParam<const char*> {};

TEST_P(IntrinsicMetricTest, MetricAndEuclideanBounds) {
  const auto m = namedMap(GetParam(), 256);
  auto vs = std::make_shared<const VisibilityStructure>(m.polygon, m.map->fitTolerance());
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rad(0.0, 0.97), ang(0.0, kTwoPi);
  std::vector<Complex> pts;
  for (int i = 0; i < 15; ++i) pts.push_back(vs->admit(m.map->eval(std::polar(rad(rng), ang(rng)))));
  std::vector<IntrinsicField> fields;
  for (Complex p : pts) fields.emplace_back(vs, p);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const double dij = fields[i].at(pts[j]);
      EXPECT_NEAR(dij, fields[j].at(pts[i]), 1e-9 * (1 + dij));
      EXPECT_GE(dij, std::abs(pts[i] - pts[j]) * (1 - 1e-12));
      if (m.polygon.segmentInside(pts[i], pts[j])) EXPECT_NEAR(dij, std::abs(pts[i] - pts[j]), 1e-9 * (1 + dij));
      for (std::size_t k = 0; k < pts.size(); ++k)
        EXPECT_LE(dij, fields[i].at(pts[k]) + fields[k].at(pts[j]) + 1e-9 * (1 + dij));
    }
}

INSTANTIATE_TEST_SUITE_P(Domains, IntrinsicMetricTest,
                         ::testing::Values("square", "lshape", "koebe", "radial-slit-disk", "spiral:0:6"));

TEST(ImageLengthTest, ClosedForms) {
  const auto id = catalogMap("identity");
  const auto k = catalogMap("koebe");
  EXPECT_NEAR(imageCurveLength(*id, {0.0, 0.5}), 0.5, 1e-12);
  EXPECT_NEAR(imageCurveLength(*k, {0.0, 0.5}), 2.0, 1e-4 * 2.0);
  EXPECT_EQ(imageCurveLength(*k, {0.3}), 0.0);
  EXPECT_NEAR(radialImageLength(*id, Complex(0, 1), 0.99), 0.99, 1e-6);
  EXPECT_NEAR(radialImageLength(*k, 1.0, 0.9), 90.0, 1e-4 * 90.0);
  EXPECT_NEAR(radialImageLength(*k, -1.0, 1 - 1e-9), 0.25, 1e-6);
}

TEST(ImageLengthTest, CurveLeavingDiskThrows) {
  EXPECT_THROW(imageCurveLength(*catalogMap("identity"), {0.0, 1.2}), DomainError);
}

TEST(ImageLengthTest, RadialLengthNondecreasing) {
  const auto m = namedMap("lshape", 256);
  double prev = 0.0;
  for (double r = 0.1; r < 0.99; r += 0.1) {
    const double len = radialImageLength(*m.map, Complex(0.6, 0.8), r);
    EXPECT_GE(len, prev);
    prev = len;
  }
}

TEST(IntrinsicModulusTest, Examples) {
  const auto id = namedMap("identity");
  EXPECT_NEAR(intrinsicModulus(*id.map, id.polygon, 0.7), 0.7, 1e-12);
  const auto sq = namedMap("square", 256);
  EXPECT_NEAR(intrinsicModulus(*sq.map, sq.polygon, 0.0), 0.0, 1e-12);
}

TEST(GehringHaymanTest, IdentityRatioIsOne) {
  const auto id = namedMap("identity");
  EXPECT_NEAR(ghRatio(*id.map, id.polygon, 0.5), 1.0, 1e-3);
}

TEST(GehringHaymanTest, SquareRatiosBounded) {
  const auto sq = namedMap("square", 256);
  auto vs = std::make_shared<const VisibilityStructure>(sq.polygon, sq.map->fitTolerance());
  const IntrinsicField field(vs, sq.map->eval(0.0));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> rad(0.05, 0.98), ang(0.0, kTwoPi);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double g = ghRatio(*sq.map, field, DiskPoint::fromComplex(std::polar(rad(rng), ang(rng))));
    EXPECT_GE(g, 0.99);
    worst = std::max(worst, g);
  }
  EXPECT_LT(worst, 5.0);
}

TEST(GehringHaymanTest, SpiralRatiosDoNotGrow) {
  const auto sp = namedMap("spiral");
  auto vs = std::make_shared<const VisibilityStructure>(sp.polygon, sp.map->fitTolerance());
  const IntrinsicField field(vs, sp.map->eval(0.0));
  const auto& dom = dynamic_cast<const SpiralMap&>(*sp.map).domain();
  std::vector<double> ratios;
  for (int j = 3; j <= 19; j += 4) {
    const double g = ghRatio(*sp.map, field, sp.map->preimageAt(dom.loop_centers[j - 1]));
    EXPECT_GE(g, 0.99);
    ratios.push_back(g);
  }
  EXPECT_LE(ratios.back(), ratios.front());
  EXPECT_LT(*std::max_element(ratios.begin(), ratios.end()), 2.0);
}

TEST(IntrinsicDiameterTest, WhitneyDiskImagesComparableToBoundaryDistance) {
  const auto m = namedMap("lshape", 1024);
  auto vs = std::make_shared<const VisibilityStructure>(m.polygon, m.map->fitTolerance());
  double worst = 0.0;
  for (double r : {0.5, 0.8, 0.9, 0.95})
    for (int k = 0; k < 8; ++k) {
      const Complex x = std::polar(r, kTwoPi * (k + 0.5) / 8);
      const double rho = (1 - r) / 2;
      std::vector<Complex> img;
      for (int q = 0; q < 12; ++q) img.push_back(m.map->eval(x + std::polar(rho, kTwoPi * q / 12)));
      const double diam = intrinsicDiameter(vs, img);
      worst = std::max(worst, diam / m.polygon.distanceToBoundary(m.map->eval(x)));
    }
  EXPECT_LT(worst, 20.0);
  EXPECT_GT(worst, 0.0);
}

}  // namespace
}  // namespace holab
