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

#include "holab/maps.hpp"
#include "holab/modulus.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace holab {
namespace {

// Exact discrete optimum by enumerating active sets: for each subset S of
// constraints, rho = A_S^T (A_S A_S^T)^{-1} 1 is optimal if its multipliers
// are nonnegative and the inactive constraints hold.
double activeSetOracle(const ModulusProblem& p) {
  const int m = static_cast<int>(p.rows.size());
  const int n = static_cast<int>(p.cells.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
  for (int g = 0; g < m; ++g)
    for (const auto& [c, l] : p.rows[g]) A(g, c) += l;
  double best = INFINITY;
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> idx;
    for (int g = 0; g < m; ++g)
      if (mask & (1 << g)) idx.push_back(g);
    Eigen::MatrixXd AS(idx.size(), n);
    for (std::size_t i = 0; i < idx.size(); ++i) AS.row(i) = A.row(idx[i]);
    const Eigen::MatrixXd G = AS * AS.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
    if (lu.rank() < static_cast<int>(idx.size())) continue;
    const Eigen::VectorXd mu = lu.solve(Eigen::VectorXd::Ones(idx.size()));
    if (mu.minCoeff() < -1e-12) continue;
    const Eigen::VectorXd rho = AS.transpose() * mu;
    if ((A * rho).minCoeff() < 1 - 1e-9) continue;
    best = std::min(best, rho.squaredNorm() * p.h * p.h);
  }
  return best;
}

TEST(ModulusOracleTest, MatchesActiveSetEnumeration) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CurveFamily fam;
    for (int k = 0; k < 6; ++k) {
      Polyline c{{u(rng), u(rng)}};
      for (int q = 0; q < 2; ++q) c.push_back({u(rng), u(rng)});
      fam.curves.push_back(c);
    }
    const auto p = ModulusProblem::build(fam, 0.25);
    const double exact = activeSetOracle(p);
    const auto r = solveModulus(p, 1e-10);
    EXPECT_NEAR(r.value, exact, 1e-6 * exact) << trial;
    EXPECT_LE(r.dual, exact * (1 + 1e-9));
    for (double res : r.density.residuals) EXPECT_GE(res, -1e-12);
  }
}

TEST(ModulusTest, RectangleCrossing) {
  const auto r = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 16);
  EXPECT_NEAR(r.value, 0.5, 0.05);
  EXPECT_LE(r.kkt_residual, 1e-6);
}

TEST(ModulusTest, RadialAnnulusFamily) {
  const auto r = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.05, Complex(-1.5, -1.5));
  EXPECT_NEAR(r.value, kTwoPi, 0.1 * kTwoPi);
}

TEST(ModulusTest, SelfConvergence) {
  const Complex lo(-1.5, -1.5);
  const double a = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.1, lo).value;
  const double b = discreteModulus(radialFamily(std::exp(-1.0), 1.0, 512), 0.05, lo).value;
  EXPECT_LE(std::abs(a - b) / b, 0.10);
  const double c = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 8).value;
  const double d = discreteModulus(horizontalFamily(2, 1, 64), 1.0 / 16).value;
  EXPECT_LE(std::abs(c - d) / d, 0.10);
}

TEST(ModulusTest, SingleCurveVanishes) {
  const CurveFamily one{"custom", {{{0.05, 0.05}, {0.95, 0.05}}}};
  double prev = INFINITY;
  for (double h : {0.1, 0.05, 0.025}) {
    const double v = discreteModulus(one, h).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(ModulusTest, ZeroLengthCurveIsAnInputError) {
  const CurveFamily bad{"custom", {{{0.5, 0.5}, {0.5, 0.5}}}};
  EXPECT_THROW(discreteModulus(bad, 0.1), ParameterError);
  EXPECT_THROW(discreteModulus(CurveFamily{}, 0.1), ParameterError);
}

TEST(ModulusTest, EnlargingFamilyNeverDecreases) {
  const Complex lo(-1.5, -1.5);
  auto small = radialFamily(0.3, 0.9, 64);
  auto big = small;
  for (const auto& c : radialFamily(0.2, 0.8, 96).curves) big.curves.push_back(c);
  EXPECT_GE(discreteModulus(big, 0.05, lo).value, discreteModulus(small, 0.05, lo).value * (1 - 1e-6));
}

TEST(ModulusTest, OverflowingFamilyHasSmallerModulus) {
  const Complex lo(-1.5, -1.5);
  const double longer = discreteModulus(radialFamily(0.3, 0.9, 256), 0.05, lo).value;
  const double shorter = discreteModulus(radialFamily(0.3, 0.6, 256), 0.05, lo).value;
  EXPECT_LE(longer, shorter * (1 + 1e-6));
}

TEST(ModulusTest, ConformalInvarianceUnderSquareMap) {
  const auto sq = namedMap("square", 256);
  const auto disk = radialFamily(0.2, 0.9, 512);
  const double a = discreteModulus(disk, 0.04, Complex(-1, -1)).value;
  const double h = 0.04 * std::abs(sq.map->deriv(0.0));
  const double b = discreteModulus(imageFamily(*sq.map, disk), h, sq.polygon.boundsLo()).value;
  EXPECT_NEAR(b / a, 1.0, 0.15) << a << " " << b;
}

TEST(ClosedFormModulusTest, RadialExamples) {
  EXPECT_NEAR(radialModulusExact(kTwoPi, std::exp(-1.0)), kTwoPi, 1e-12);
  EXPECT_EQ(radialModulusExact(0.0, 0.5), 0.0);
  EXPECT_NEAR(radialModulusExact(kPi, std::exp(-2.0)), kPi / 2, 1e-12);
  EXPECT_THROW(radialModulusExact(1.0, 1.0), ParameterError);
  EXPECT_THROW(radialModulusExact(1.0, 0.0), ParameterError);
}

TEST(ClosedFormModulusTest, AnnulusExamples) {
  EXPECT_NEAR(annulusModulusBound(1, std::exp(1.0)), kTwoPi, 1e-12);
  EXPECT_NEAR(annulusModulusBound(1, std::exp(4.0)), kPi / 2, 1e-12);
  EXPECT_THROW(annulusModulusBound(2, 1), ParameterError);
  const double d = discreteModulus(annulusCrossingFamily(1, std::exp(1.0), 256), 0.1, Complex(-3, -3)).value;
  EXPECT_LE(d, kTwoPi * 1.1);
}

TEST(IntrinsicModulusBoundTest, SpokesFromTinyDisk) {
  auto vs = std::make_shared<const VisibilityStructure>(unitSquare());
  const double delta = 0.0049, L = 100 * delta;
  const PointSet e{{0.5, 0.5}, delta / 2};
  CurveFamily spokes{"radial-to-set", {}};
  for (int k = 0; k < 256; ++k) {
    const Complex u = std::polar(1.0, kTwoPi * (k + 0.5) / 256);
    const double t = 0.5 / std::max(std::abs(u.real()), std::abs(u.imag()));
    spokes.curves.push_back({e.center + e.radius * u, e.center + t * u});
  }
  const auto c = checkIntrinsicModulusBound(vs, e, spokes, delta, L, 0.01);
  EXPECT_TRUE(c.violations.empty());
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.bound, 100 / std::log(101.0), 1e-12);
  const auto weak = checkIntrinsicModulusBound(vs, e, spokes, delta, delta, 0.01);
  EXPECT_NEAR(weak.bound, 100 / std::log(2.0), 1e-12);
  EXPECT_TRUE(weak.pass);
}

TEST(IntrinsicModulusBoundTest, ReportsPreconditionViolations) {
  auto vs = std::make_shared<const VisibilityStructure>(unitSquare());
  const PointSet e{{0.5, 0.5}, 0.01};
  const CurveFamily far{"custom", {{{0.1, 0.1}, {0.2, 0.1}}}};
  const auto c = checkIntrinsicModulusBound(vs, e, far, 0.005, 0.5, 0.05);
  EXPECT_FALSE(c.pass);
  EXPECT_GE(c.violations.size(), 3u);
}

TEST(IntrinsicModulusBoundTest, SpiralChannelFamily) {
  const auto dom = buildSpiralDomain({.alpha = 0.0, .loops = 10});
  auto vs = std::make_shared<const VisibilityStructure>(dom.polygon);
  const auto fam = channelFamily(dom, 1.0, 8.0, 32);
  double radius = 0.0;
  for (const auto& c : fam.curves) radius = std::max(radius, std::abs(c.front() - dom.loop_centers[0]));
  const PointSet e{dom.loop_centers[0], radius};
  double L = INFINITY;
  for (const auto& c : fam.curves) L = std::min(L, polylineLength(c));
  const auto c = checkIntrinsicModulusBound(vs, e, fam, 2 * radius, L, dom.minChannelWidth() / 4,
                                            100.0);
  EXPECT_TRUE(c.violations.empty()) << c.violations.front();
  EXPECT_TRUE(c.pass);
  EXPECT_LT(c.measured, 0.1);
}

TEST(ShadowEscapeTest, IdentityNeverEscapes) {
  const auto id = namedMap("identity");
  auto vs = std::make_shared<const VisibilityStructure>(id.polygon);
  for (double r : {0.0, 0.5, 0.9}) {
    const auto c = checkShadowEscapeBound(*id.map, vs, DiskPoint::fromComplex(std::polar(r, 1.0)), 10,
                                          EscapeVariant::kIntrinsic);
    EXPECT_EQ(c.measured, 0.0);
    EXPECT_TRUE(c.pass);
  }
}

TEST(ShadowEscapeTest, SpiralFractionDecaysInM) {
  const auto sp = namedMap("spiral");
  auto vs = std::make_shared<const VisibilityStructure>(sp.polygon, sp.map->fitTolerance());
  const auto& dom = dynamic_cast<const SpiralMap&>(*sp.map).domain();
  const auto x = sp.map->preimageAt(dom.loop_centers[3]);
  std::vector<double> frac;
  for (double M : {4.0, 16.0, 64.0}) {
    const auto c = checkShadowEscapeBound(*sp.map, vs, x, M, EscapeVariant::kIntrinsic);
    EXPECT_TRUE(c.pass);
    frac.push_back(c.measured);
  }
  EXPECT_GT(frac[0], 0.0);
  EXPECT_GE(frac[0], frac[1]);
  EXPECT_GE(frac[1], frac[2]);
  EXPECT_GE(frac[0], 2 * frac[2]);
}

TEST(ShadowEscapeTest, EuclideanVariantOnTranslatedKoebe) {
  const TranslatedMap k(catalogMap("koebe"), 1.0);
  for (double r : {0.3, 0.6, 0.9}) {
    const auto c = checkShadowEscapeBound(k, nullptr, DiskPoint::fromComplex(std::polar(r, 2.0)), 8,
                                          EscapeVariant::kEuclidean);
    EXPECT_LE(c.measured, 10 / std::log(8.0));
    EXPECT_TRUE(c.pass);
  }
  EXPECT_THROW(checkShadowEscapeBound(*catalogMap("koebe"), nullptr, DiskPoint::fromComplex(0.5), 8,
                                      EscapeVariant::kEuclidean),
               PreconditionError);
}

}  // namespace
}  // namespace holab
