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

// lab: command-line front end for the holab experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "holab/experiments.hpp"

namespace {

using namespace holab;

struct Output {
  std::string path;
  std::string format = "json";
};

void addOutput(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "report path (stdout when omitted)");
  cmd->add_option("--format", out.format, "report format")->check(CLI::IsMember({"json", "csv"}));
}

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int finish(ExperimentReport& rep, const Output& out, const std::vector<std::string>& argv) {
  rep.config["argv"] = argv;
  for (const auto& c : rep.checks)
    std::cerr << statusName(c.status) << "  " << c.name << "  measured " << c.measured << "  target " << c.target()
              << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
  if (out.path.empty()) {
    std::cout << (out.format == "csv" ? rep.toCsv() : rep.toJson().dump(2) + "\n");
  } else {
    emitReport(rep, out.format, out.path);
  }
  std::cerr << rep.count(CheckStatus::kPass) << " pass, " << rep.count(CheckStatus::kFail) << " fail, "
            << rep.count(CheckStatus::kInconclusive) << " inconclusive\n";
  return rep.exitCode();
}

MappedDomain loadDomain(const std::string& map, const std::string& domain, std::size_t resolution) {
  if (domain.empty()) return namedMap(map, resolution);
  const auto poly = loadPolygon(domain);
  if (std::filesystem::exists(map)) {
    auto f = loadMap(map);
    return {map, f, poly};
  }
  return mappedFromPolygon(map.empty() ? domain : map, poly, resolution);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hardy-Orlicz lab for conformal maps"};
  app.require_subcommand(1);
  std::vector<std::string> args(argv + 1, argv + argc);

  Output out;
  SpiralExperimentConfig spiral;
  auto* sp = app.add_subcommand("spiral", "spiral counterexample: exponents and membership");
  sp->add_option("--alpha", spiral.alpha, "spiral growth exponent")->check(CLI::NonNegativeNumber);
  sp->add_option("--loops", spiral.loops, "number of loops J");
  sp->add_option("--samples-per-loop", spiral.samples_per_loop);
  sp->add_option("--deltas", spiral.deltas, "probe scalings")->delimiter(',');
  sp->add_option("--circles", spiral.probe_circles, "probe circles");
  sp->add_flag("--skip-map", spiral.skip_map, "domain stage only");
  sp->add_option("--seed", spiral.seed);
  addOutput(sp, out);

  EquivalenceConfig eq;
  std::string maps, psis;
  auto* ev = app.add_subcommand("equivalence", "euclidean against intrinsic membership for doubling growth");
  ev->add_option("--maps", maps, "comma-separated map names");
  ev->add_option("--psi", psis, "comma-separated growth functions");
  ev->add_option("--deltas", eq.deltas)->delimiter(',');
  ev->add_option("--resolution", eq.resolution, "fit resolution for polygon maps");
  ev->add_flag("!--no-derivative", eq.derivative, "skip the derivative criterion");
  addOutput(ev, out);

  LemmaConfig lemmas;
  std::string lemma_map = "square", lemma_domain;
  std::size_t lemma_res = 1024;
  auto* lm = app.add_subcommand("lemmas", "distortion, modulus and escape lemma battery");
  lm->add_option("--map", lemma_map, "map name, or saved map file with --domain");
  lm->add_option("--domain", lemma_domain, "polygon JSON to fit or pair with a saved map")->check(CLI::ExistingFile);
  lm->add_option("--resolution", lemma_res);
  lm->add_option("--gh-samples", lemmas.gh_samples);
  lm->add_option("--seed", lemmas.seed);
  addOutput(lm, out);

  std::string family = "radial";
  double sigma = kTwoPi, radius = std::exp(-1.0), spacing = 0.05;
  int curves = 512;
  auto* md = app.add_subcommand("modulus", "discrete modulus against the exact value");
  md->add_option("--family", family)->check(CLI::IsMember({"radial", "annulus"}));
  md->add_option("--sigma", sigma, "measure of the target arc")->check(CLI::Range(1e-9, kTwoPi));
  md->add_option("--r", radius, "inner radius")->check(CLI::Range(1e-9, 1.0 - 1e-9));
  md->add_option("--spacing", spacing, "lattice spacing")->check(CLI::PositiveNumber);
  md->add_option("--curves", curves)->check(CLI::PositiveNumber);
  addOutput(md, out);

  std::string probe_map = "koebe", probe_psi = "pow:1", metric = "euclid", expect;
  std::vector<double> probe_deltas = defaultDeltas();
  int levels = 14;
  auto* pr = app.add_subcommand("probe", "membership probe for one map and growth function");
  pr->add_option("--map", probe_map);
  pr->add_option("--psi", probe_psi);
  pr->add_option("--metric", metric)->check(CLI::IsMember({"euclid", "intrinsic"}));
  pr->add_option("--deltas", probe_deltas)->delimiter(',');
  pr->add_option("--levels", levels, "dyadic depth levels");
  pr->add_option("--expect", expect, "expected verdict")->check(CLI::IsMember({"bounded", "diverging"}));
  addOutput(pr, out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sp) {
      auto r = runSpiralExperiment(spiral);
      return finish(r.report, out, args);
    }
    if (*ev) {
      if (!maps.empty()) eq.maps = splitList(maps);
      if (!psis.empty()) eq.psis = splitList(psis);
      auto r = runEquivalence(eq);
      return finish(r.report, out, args);
    }
    if (*lm) {
      auto rep = runLemmaBattery(loadDomain(lemma_map, lemma_domain, lemma_res), lemmas);
      rep.config["domain"] = lemma_domain;
      rep.config["resolution"] = lemma_res;
      return finish(rep, out, args);
    }
    if (*md) {
      ExperimentReport rep;
      rep.experiment = "modulus";
      rep.config = {{"family", family}, {"sigma", sigma}, {"r", radius}, {"h", spacing}, {"curves", curves}};
      const Complex lo(-1.5, -1.5);
      if (family == "radial") {
        const auto arc = CircleSet::fromIntervals({{-sigma / 2, sigma}});
        const auto fam = radialFamily(radius, 1.0, curves, 0.0, sigma < kTwoPi ? &arc : nullptr);
        const double exact = radialModulusExact(sigma, radius);
        const double m = discreteModulus(fam, spacing, lo).value;
        rep.data = {{"discrete", m}, {"exact", exact}, {"family_size", fam.curves.size()}};
        rep.add(bandCheck("modulus.radial", m / exact, 0.9, 1.1, "discrete over exact"));
      } else {
        const double bound = annulusModulusBound(radius, 1.0);
        const double m = discreteModulus(annulusCrossingFamily(radius, 1.0, curves), spacing, lo).value;
        rep.data = {{"discrete", m}, {"bound", bound}};
        rep.add(bandCheck("modulus.annulus", m / bound, 0.0, 1.1, "discrete over the annulus bound"));
      }
      return finish(rep, out, args);
    }
    if (*pr) {
      const auto dom = namedMap(probe_map);
      const auto psi = GrowthFunction::parse(probe_psi);
      std::shared_ptr<const VisibilityStructure> vs;
      if (metric == "intrinsic") vs = std::make_shared<const VisibilityStructure>(dom.polygon, dom.map->fitTolerance());
      ModulusEvaluator m(dom.map, metric == "euclid" ? Metric::kEuclidean : Metric::kIntrinsic, vs);
      const auto* spiral_map = dynamic_cast<const SpiralMap*>(dom.map.get());
      const auto depths = spiral_map ? spiralProbeDepths(spiral_map->domain(), 12) : dyadicDepths(levels);
      const auto res = membershipProbe(m, psi, probe_deltas, depths);
      ExperimentReport rep;
      rep.experiment = "probe";
      rep.config = {{"map", probe_map}, {"psi", psi.spec()}, {"metric", metric}, {"deltas", probe_deltas},
                    {"depths", depths}, {"expect", expect}};
      rep.data = res.toJson();
      Check c{"probe.verdict", NAN, -INFINITY, INFINITY, CheckStatus::kPass, verdictName(res.verdict)};
      if (res.verdict == Verdict::kInconclusive) {
        c.status = CheckStatus::kInconclusive;
      } else if (!expect.empty()) {
        const Verdict want = parseVerdict(expect + "-trend");
        c.measured = res.verdict == want ? 1.0 : 0.0;
        c.lo = c.hi = 1.0;
        c.status = res.verdict == want ? CheckStatus::kPass : CheckStatus::kFail;
      }
      rep.add(c);
      return finish(rep, out, args);
    }
  } catch (const Error& e) {
    std::cerr << "lab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
