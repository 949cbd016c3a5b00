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

#include "holab/conformal.hpp"
#include "holab/maps.hpp"
#include "holab/spiral_map.hpp"
#include "holab/zipper.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

namespace holab {
namespace {

std::vector<Complex> polarGrid(const std::vector<double>& radii, int angles, double phase = 0.1) {
  std::vector<Complex> out{0.0};
  for (double r : radii)
    for (int k = 0; k < angles; ++k) out.push_back(std::polar(r, phase + kTwoPi * k / angles));
  return out;
}

bool injectiveOn(const ConformalMap& f, const std::vector<Complex>& zs) {
  std::vector<Complex> ws;
  for (auto z : zs) ws.push_back(f.eval(z));
  for (std::size_t i = 0; i < zs.size(); ++i)
    for (std::size_t j = i + 1; j < zs.size(); ++j)
      if (std::abs(ws[i] - ws[j]) <= 1e-9 && std::abs(zs[i] - zs[j]) > 1e-9) return false;
  return true;
}

double worstDerivativeMismatch(const ConformalMap& f, const std::vector<Complex>& zs) {
  double worst = 0.0;
  for (auto z : zs) {
    const double h = std::min(1e-6, 0.01 * (1.0 - std::abs(z)));
    const Complex fd = (f.eval(z + h) - f.eval(z - h)) / (2 * h);
    worst = std::max(worst, std::abs(fd - f.deriv(z)) / std::abs(fd));
  }
  return worst;
}

TEST(CatalogTest, Examples) {
  const auto id = catalogMap("identity");
  const auto k = catalogMap("koebe");
  EXPECT_EQ(id->eval(0.5), Complex(0.5));
  EXPECT_NEAR(std::abs(k->eval(0.5) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k->deriv(0.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(id->invert({0.3, 0.1}) - Complex(0.3, 0.1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(k->invert(2.0) - 0.5), 0.0, 1e-12);
  EXPECT_THROW(k->eval(1.0), DomainError);
  EXPECT_THROW(k->eval({0.8, 0.8}), DomainError);
  EXPECT_THROW(k->invert(-3.0), PositionError);
}

TEST(CatalogTest, RadialBoundaryValue) {
  const auto id = catalogMap("identity");
  EXPECT_NEAR(std::abs(radialBoundaryValue(*id, 1.0, 0.999).value - 0.999), 0.0, 1e-15);
  const auto k = catalogMap("koebe");
  const auto bv = radialBoundaryValue(*k, -1.0, 0.999);
  EXPECT_NEAR(bv.value.real(), -0.999 / (1.999 * 1.999), 1e-14);
  EXPECT_NEAR(bv.value.real(), -0.25, 1e-4);
  EXPECT_LT(bv.cauchy, 1e-5);
  EXPECT_THROW(radialBoundaryValue(*k, 1.0, 0.5), ParameterError);
}

class CatalogProperty : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogProperty, InverseIsConsistent) {
  const auto f = catalogMap(GetParam());
  for (auto z : polarGrid({0.2, 0.6, 0.9, 0.99}, 24)) {
    const Complex w = f->value(z);
    const Complex back = f->preimage(w);
    EXPECT_LT(std::abs(f->value(back) - w), 1e-10 * std::max(1.0, std::abs(w))) << z;
    EXPECT_LT(std::abs(back - z), 1e-9) << z;
  }
}

TEST_P(CatalogProperty, DerivativeMatchesFiniteDifferences) {
  const auto f = catalogMap(GetParam());
  EXPECT_LT(worstDerivativeMismatch(*f, polarGrid({0.1, 0.5, 0.9, 0.99}, 16)), 1e-4);
}

TEST_P(CatalogProperty, KoebeDistortionRatio) {
  const auto f = catalogMap(GetParam());
  for (auto z : polarGrid({0.05, 0.3, 0.6, 0.9, 0.99, 0.999}, 32)) {
    const double ratio = std::abs(f->deriv(z)) * (1 - std::abs(z)) / f->boundaryDistance(f->eval(z));
    EXPECT_GE(ratio, 0.25) << z;
    EXPECT_LE(ratio, 4.0) << z;
  }
}

TEST_P(CatalogProperty, InjectiveOnGrid) {
  const auto f = catalogMap(GetParam());
  EXPECT_TRUE(injectiveOn(*f, polarGrid({0.2, 0.5, 0.8, 0.95}, 40)));
}

TEST_P(CatalogProperty, PolygonContainsProbedImages) {
  const CatalogMap f(CatalogMap::parseKind(GetParam()));
  const auto poly = f.imagePolygon();
  for (auto z : polarGrid({0.5, 1 - std::ldexp(1.0, -10), 1 - std::ldexp(1.0, -14)}, 64, 0.0))
    EXPECT_TRUE(poly.contains(f.value(z))) << GetParam() << " " << z;
}

INSTANTIATE_TEST_SUITE_P(Maps, CatalogProperty,
                         ::testing::Values("identity", "koebe", "half-plane", "radial-slit-disk", "strip-log"));

TEST(ZipperTest, DiskPolygonIsNearlyARotation) {
  const auto f = fitConformal(regularPolygon(256), 1024);
  const Complex c = f->deriv(0.0) / std::abs(f->deriv(0.0));
  double worst = 0.0;
  for (auto z : polarGrid({0.3, 0.6, 0.9}, 64)) worst = std::max(worst, std::abs(f->eval(z) - c * z));
  EXPECT_LE(worst, 1e-2);
}

TEST(ZipperTest, SquareNormalization) {
  const auto sq = unitSquare();
  const auto f = fitConformal(sq, 1024);
  EXPECT_LT(std::abs(f->eval(0.0) - Complex(0.5, 0.5)), 1e-6);
  EXPECT_NEAR(f->deriv(0.0).imag(), 0.0, 1e-9);
  // Conformal radius of the unit square about its center, 4 sqrt(pi) / Gamma(1/4)^2.
  EXPECT_NEAR(f->deriv(0.0).real(), 4 * std::sqrt(kPi) / std::pow(std::tgamma(0.25), 2), 1e-3);
  EXPECT_LT(f->fitTolerance(), 1e-3);
}

TEST(ZipperTest, SquareInterior) {
  const auto f = fitConformal(unitSquare(), 512);
  const auto grid = polarGrid({0.2, 0.5, 0.8, 0.95, 0.99}, 32);
  EXPECT_TRUE(injectiveOn(*f, grid));
  EXPECT_LT(worstDerivativeMismatch(*f, grid), 1e-4);
  for (auto z : grid) {
    const Complex w = f->eval(z);
    EXPECT_TRUE(f->polygon().contains(w));
    EXPECT_LT(std::abs(f->eval(f->invert(w)) - w), 1e-8);
    const double ratio = std::abs(f->deriv(z)) * (1 - std::abs(z)) / f->boundaryDistance(w);
    EXPECT_GE(ratio, 0.25);
    EXPECT_LE(ratio, 4.0);
  }
  const auto bv = radialBoundaryValue(*f, Complex(0, 1), 0.999);
  EXPECT_LE(f->polygon().unsignedBoundaryDistance(bv.value), f->fitTolerance() + 1e-2);
}

TEST(ZipperTest, LShapeFits) {
  const auto f = fitConformal(lShape(), 1024);
  EXPECT_LT(std::abs(f->eval(0.0) - lShape().basepoint()), 1e-6);
  EXPECT_TRUE(injectiveOn(*f, polarGrid({0.3, 0.7, 0.95}, 48)));
  EXPECT_LT(f->fitTolerance(), 1e-2);
}

TEST(ZipperTest, RejectsLowResolution) {
  EXPECT_THROW(fitConformal(regularPolygon(64), 32), ParameterError);
}

TEST(ZipperTest, JsonRoundTrip) {
  const auto f = fitConformal(unitSquare(), 256);
  const auto path = (std::filesystem::temp_directory_path() / "holab_square_map.json").string();
  saveMap(*f, path);
  const auto g = loadMap(path);
  std::filesystem::remove(path);
  for (auto z : polarGrid({0.4, 0.9}, 8)) EXPECT_EQ(f->eval(z), g->eval(z));
  EXPECT_EQ(g->fitTolerance(), f->fitTolerance());
}

TEST(SpiralMapTest, Normalization) {
  const SpiralMap f({.alpha = 0, .loops = 12});
  EXPECT_LT(std::abs(f.eval(0.0) - f.domain().polygon.basepoint()), 1e-12);
  EXPECT_GT(f.deriv(0.0).real(), 0.0);
  EXPECT_NEAR(f.deriv(0.0).imag(), 0.0, 1e-12);
}

TEST(SpiralMapTest, InjectiveAndDerivative) {
  const SpiralMap f({.alpha = 0, .loops = 12});
  const auto grid = polarGrid({0.2, 0.5, 0.8, 0.95, 0.99, 0.999}, 40);
  EXPECT_TRUE(injectiveOn(f, grid));
  EXPECT_LT(worstDerivativeMismatch(f, grid), 1e-4);
}

TEST(SpiralMapTest, LoopCenterRoundTrip) {
  const SpiralMap f({.alpha = 0, .loops = 12});
  const auto& d = f.domain();
  for (int j = 1; j <= 11; ++j) {
    const Complex c = d.loop_centers[j - 1];
    const DiskPoint p = f.preimageAt(c);
    EXPECT_LE(std::abs(f.valueAt(p) - c), 1e-6) << j;
    EXPECT_GT(p.s, 0.0);
  }
  // c_3 is shallow enough for an ordinary complex preimage only at small depth.
  const DiskPoint p3 = f.preimageAt(d.loop_centers[2]);
  EXPECT_GT(p3.s, kMaxShallowDepth);
  EXPECT_THROW(f.invert(d.loop_centers[2]), ResolutionError);
}

TEST(SpiralMapTest, DeepAndShallowForms) {
  const SpiralMap f({.alpha = 1, .loops = 10});
  for (double s : {5.0, 15.0, 25.0}) {
    for (double phi : {0.0, 0.7, -4.0, 300.0}) {
      const DiskPoint p = DiskPoint::offset(s, f.deepDirection(), phi);
      const Complex z = std::polar(p.radius(), p.angle());
      const Complex deep = f.valueAt(p);
      EXPECT_LT(std::abs(deep - f.value(z)), 1e-12 * std::exp(s) * std::abs(deep)) << s << " " << phi;
    }
  }
}

TEST(SpiralMapTest, KoebeRatioAlongTheChannel) {
  const SpiralMap f({.alpha = 0, .loops = 20});
  const auto& d = f.domain();
  for (int j = 3; j <= 19; ++j) {
    const DiskPoint p = f.preimageAt(d.loop_centers[j - 1]);
    const double ratio = std::abs(f.scaledDerivativeAt(p)) / f.boundaryDistance(f.valueAt(p));
    EXPECT_GE(ratio, 0.25);
    EXPECT_LE(ratio, 4.0);
  }
}

TEST(SpiralMapTest, DepthOfLoopCentersGrowsQuadratically) {
  const SpiralMap f({.alpha = 0, .loops = 20});
  std::vector<double> lx, ly;
  for (int j = 3; j <= 19; ++j) {
    lx.push_back(std::log(j));
    ly.push_back(std::log(f.preimageAt(f.domain().loop_centers[j - 1]).s));
  }
  const double slope = leastSquaresSlope(lx, ly);
  EXPECT_GE(slope, 1.7);
  EXPECT_LE(slope, 2.3);
}

TEST(SpiralMapTest, JsonRoundTrip) {
  const SpiralMap f({.alpha = 0.5, .loops = 6});
  const auto g = mapFromJson(f.toJson());
  EXPECT_EQ(g->name(), "spiral");
  EXPECT_LT(std::abs(g->eval(0.3) - f.eval(0.3)), 1e-14);
  EXPECT_THROW(mapFromJson(nlohmann::json{{"kind", "nope"}}), FormatError);
  EXPECT_THROW(mapFromJson(nlohmann::json{{"name", "koebe"}}), FormatError);
}

TEST(NamedMapTest, Lookup) {
  EXPECT_EQ(namedMap("koebe").map->name(), "koebe");
  const auto s = namedMap("spiral:1:8");
  EXPECT_EQ(dynamic_cast<const SpiralMap&>(*s.map).domain().spec.loops, 8);
  EXPECT_THROW(namedMap("nonsense"), ParameterError);
  EXPECT_THROW(namedMap("spiral:x"), ParameterError);
}

}  // namespace
}  // namespace holab
