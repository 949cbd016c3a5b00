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

#include "holab/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace holab {
namespace {

TEST(FitExponentTest, RecoversPowerLaw) {
  std::vector<double> x, y;
  for (int j = 3; j < 20; ++j) x.push_back(j), y.push_back(3.0 * std::pow(j, 1.5));
  const auto f = fitExponent(x, y);
  EXPECT_NEAR(f.exponent, 1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-10);
  EXPECT_LT(f.residual, 1e-12);
}

TEST(FitExponentTest, InvariantUnderRescaling) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> x, y;
  for (int j = 3; j < 20; ++j) x.push_back(j), y.push_back(j * j * u(rng));
  const double e = fitExponent(x, y).exponent;
  for (double c : {1e-3, 0.5, 40.0, 1e6}) {
    std::vector<double> z;
    for (double v : y) z.push_back(c * v);
    EXPECT_NEAR(fitExponent(x, z).exponent, e, 1e-10);
  }
}

TEST(FitExponentTest, RejectsBadData) {
  EXPECT_THROW(fitExponent({1, 2, 3}, {1, 2, 3}), ParameterError);
  EXPECT_THROW(fitExponent({1, 2, 3, 4}, {1, 2, 3}), ParameterError);
  EXPECT_THROW(fitExponent({1, 2, 3, 4}, {1, 0, 3, 4}), DomainError);
}

TEST(CheckTest, BandStatus) {
  EXPECT_EQ(bandCheck("a", 1.0, 0.85, 1.15).status, CheckStatus::kPass);
  EXPECT_EQ(bandCheck("a", 1.2, 0.85, 1.15).status, CheckStatus::kFail);
  EXPECT_EQ(bandCheck("a", NAN, 0.85, 1.15).status, CheckStatus::kInconclusive);
  EXPECT_EQ(bandCheck("a", INFINITY, 6, INFINITY).status, CheckStatus::kPass);
  EXPECT_EQ(parseStatus(statusName(CheckStatus::kInconclusive)), CheckStatus::kInconclusive);
  EXPECT_THROW(parseStatus("maybe"), FormatError);
}

ExperimentReport sampleReport() {
  ExperimentReport r;
  r.experiment = "sample";
  r.config = {{"alpha", 0.0}};
  r.seed = 42;
  r.add(bandCheck("first", 1.0, 0.0, 2.0, "note"));
  r.add(bandCheck("second", 3.0, 0.0, 2.0));
  r.add(inconclusiveCheck("third", "skipped"));
  r.data["series"] = {1.0, 2.0};
  return r;
}

TEST(ReportTest, ExitCodes) {
  auto r = sampleReport();
  EXPECT_EQ(r.exitCode(), 1);
  r.checks.erase(r.checks.begin() + 1);
  EXPECT_EQ(r.exitCode(), 2);
  r.checks.pop_back();
  EXPECT_EQ(r.exitCode(), 0);
}

TEST(ReportTest, JsonRoundTrip) {
  const auto r = sampleReport();
  const auto back = ExperimentReport::fromJson(r.toJson());
  EXPECT_EQ(back.toJson(), r.toJson());
  EXPECT_EQ(r.toJson()["summary"]["fail"], 1);
  EXPECT_THROW(ExperimentReport::fromJson({{"experiment", "x"}}), FormatError);
}

TEST(ReportTest, CsvHasOneRowPerCheck) {
  const auto csv = sampleReport().toCsv();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "check,measured,target,verdict");
}

TEST(ReportTest, EmitErrors) {
  const auto r = sampleReport();
  EXPECT_THROW(emitReport(r, "json", "/nonexistent-dir/r.json"), IoError);
  EXPECT_THROW(emitReport(r, "xml", "/tmp/r.xml"), ParameterError);
  const std::string path = testing::TempDir() + "report.csv";
  emitReport(r, "csv", path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(SpiralExperimentTest, ExponentBands) {
  EXPECT_DOUBLE_EQ(spiralExponentBand(1, 0).lo, 0.85);
  EXPECT_DOUBLE_EQ(spiralExponentBand(2, 0).hi, 2.2);
  EXPECT_DOUBLE_EQ(spiralExponentBand(3, 1).lo, 2.7);
  EXPECT_DOUBLE_EQ(spiralExponentBand(2, 0.5).hi, 2.3);
}

TEST(SpiralExperimentTest, DomainStageStandsAlone) {
  SpiralExperimentConfig cfg;
  cfg.skip_map = true;
  const auto a = runSpiralExperiment(cfg);
  for (const char* n : {"spiral.exponent.euclid", "spiral.exponent.intrinsic", "spiral.exponent.qh"})
    EXPECT_EQ(a.report.find(n)->status, CheckStatus::kPass) << n;
  EXPECT_EQ(a.report.find("spiral.membership.intrinsic")->status, CheckStatus::kInconclusive);
  EXPECT_EQ(a.report.exitCode(), 2);
  EXPECT_EQ(a.rows.size(), 17u);
  EXPECT_EQ(a.report.config["loops"], 20);
  const auto b = runSpiralExperiment(cfg);
  EXPECT_EQ(a.report.toJson().dump(), b.report.toJson().dump());
}

TEST(SpiralExperimentTest, ConfigRoundTrip) {
  SpiralExperimentConfig cfg;
  cfg.alpha = 1;
  cfg.loops = 16;
  cfg.deltas = {1, 0.5};
  EXPECT_EQ(SpiralExperimentConfig::fromJson(cfg.toJson()).toJson(), cfg.toJson());
  cfg.loops = 5;
  EXPECT_THROW(runSpiralExperiment(cfg), ParameterError);
}

TEST(SpiralExperimentTest, ProbeGridSpansTheChannel) {
  const auto dom = buildSpiralDomain({.alpha = 0.0, .loops = 20});
  const auto d = spiralProbeDepths(dom, 12);
  ASSERT_EQ(d.size(), 12u);
  EXPECT_DOUBLE_EQ(d.front(), 50.0);
  EXPECT_NEAR(d.back(), dom.strip_length - std::log(4.0) - 5.0, 1e-9);
  EXPECT_TRUE(std::is_sorted(d.begin(), d.end()));
}

TEST(EquivalenceTest, SmallSweepAgrees) {
  EquivalenceConfig cfg;
  cfg.maps = {"identity", "koebe"};
  cfg.psis = {"pow:0.4", "pow:2"};
  const auto r = runEquivalence(cfg);
  EXPECT_EQ(r.report.exitCode(), 0);
  EXPECT_EQ(r.report.checks.size(), 8u);
  const auto* k = r.find("koebe", "pow:2");
  ASSERT_NE(k, nullptr);
  EXPECT_EQ(k->euclid, Verdict::kDiverging);
  EXPECT_EQ(r.find("koebe", "pow:0.4")->intrinsic, Verdict::kBounded);
  EXPECT_EQ(r.find("identity", "pow:2")->derivative, Verdict::kBounded);
}

TEST(EquivalenceTest, RequiresDoubling) {
  EquivalenceConfig cfg;
  cfg.maps = {"identity"};
  cfg.psis = {"pow:1", "expalpha:0"};
  EXPECT_THROW(runEquivalence(cfg), PreconditionError);
}

TEST(EquivalenceTest, CellErrorsAreInconclusive) {
  EquivalenceConfig cfg;
  cfg.maps = {"no-such-map"};
  cfg.psis = {"pow:1"};
  cfg.derivative = false;
  const auto r = runEquivalence(cfg);
  ASSERT_EQ(r.report.checks.size(), 1u);
  EXPECT_EQ(r.report.checks[0].status, CheckStatus::kInconclusive);
  EXPECT_FALSE(r.cells[0].error.empty());
}

TEST(LemmaBatteryTest, IdentityPassesTrivially) {
  const auto r = runLemmaBattery(namedMap("identity"));
  EXPECT_EQ(r.exitCode(), 0);
  EXPECT_NEAR(r.find("koebe_distortion")->measured, 1.0, 1e-9);
  EXPECT_LT(r.find("whitney_harnack")->measured, 1e-12);
  EXPECT_NEAR(r.find("gehring_hayman.max")->measured, 1.0, 1e-3);
}

TEST(LemmaBatteryTest, SquarePasses) {
  const auto r = runLemmaBattery(namedMap("square", 1024));
  EXPECT_EQ(r.exitCode(), 0);
  EXPECT_EQ(r.data["omitted"].size(), 0u);
}

TEST(LemmaBatteryTest, TruncatedKoebeOmitsLatticeChecks) {
  const auto r = runLemmaBattery(namedMap("koebe"));
  EXPECT_EQ(r.exitCode(), 0);
  EXPECT_EQ(r.find("qh_quasi_invariance"), nullptr);
  EXPECT_EQ(r.find("intrinsic_modulus"), nullptr);
}

TEST(LemmaBatteryTest, SpiralHasNoGhTrend) {
  const auto r = runLemmaBattery(namedMap("spiral"));
  EXPECT_EQ(r.exitCode(), 0);
  EXPECT_LT(r.find("gehring_hayman.trend")->measured, 0.5);
  const auto frac = r.data["shadow_escape"]["fractions"].get<std::vector<double>>();
  EXPECT_GT(frac.front(), frac.back());
}

TEST(LemmaBatteryTest, ConfigRoundTripAndDeterminism) {
  LemmaConfig cfg;
  cfg.gh_samples = 50;
  cfg.seed = 9;
  EXPECT_EQ(LemmaConfig::fromJson(cfg.toJson()).toJson(), cfg.toJson());
  const auto md = namedMap("lshape", 512);
  EXPECT_EQ(runLemmaBattery(md, cfg).toJson().dump(), runLemmaBattery(md, cfg).toJson().dump());
}

}  // namespace
}  // namespace holab
