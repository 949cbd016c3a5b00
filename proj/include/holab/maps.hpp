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

// Map construction by name and JSON persistence.

#pragma once

#include <fstream>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "holab/conformal.hpp"
#include "holab/errors.hpp"
#include "holab/spiral_map.hpp"
#include "holab/zipper.hpp"

namespace holab {

// A map together with the polygon used for domain-side computations.
struct MappedDomain {
  std::string label;
  MapPtr map;
  PolygonDomain polygon;
};

inline MapPtr mapFromJson(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "catalog")
      return std::make_shared<CatalogMap>(CatalogMap::parseKind(j.at("name").get<std::string>()),
                                          j.value("param", 0.5));
    if (kind == "zipper") return ZipperMap::fromJson(j);
    if (kind == "spiral") return std::make_shared<SpiralMap>(SpiralMap::specFromJson(j));
    if (kind == "translated") {
      const auto& sh = j.at("shift");
      return std::make_shared<TranslatedMap>(mapFromJson(j.at("base")),
                                             Complex(sh.at(0).get<double>(), sh.at(1).get<double>()));
    }
    throw FormatError("unknown map kind: " + kind);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed map JSON: ") + e.what());
  }
}

inline void saveMap(const ConformalMap& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << f.toJson().dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

inline MapPtr loadMap(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed map JSON: ") + e.what());
  }
  return mapFromJson(j);
}

inline MappedDomain mappedFromPolygon(const std::string& label, const PolygonDomain& dom,
                                      std::size_t resolution) {
  auto f = fitConformal(dom, std::max(resolution, dom.size()));
  return {label, f, f->polygon()};
}

// Names: identity, koebe, half-plane, radial-slit-disk, strip-log, square,
// disk256, lshape, spiral[:ALPHA[:LOOPS]].
inline MappedDomain namedMap(const std::string& name, std::size_t resolution = 1024) {
  if (name == "square") return mappedFromPolygon(name, unitSquare(), resolution);
  if (name == "disk256") return mappedFromPolygon(name, regularPolygon(256), resolution);
  if (name == "lshape") return mappedFromPolygon(name, lShape(), resolution);
  if (name.rfind("spiral", 0) == 0) {
    SpiralSpec spec;
    spec.loops = 20;
    const std::string rest = name.substr(6);
    if (!rest.empty()) {
      if (rest[0] != ':') throw ParameterError("spiral map spec is spiral[:ALPHA[:LOOPS]]");
      const auto colon = rest.find(':', 1);
      try {
        spec.alpha = std::stod(rest.substr(1, colon == std::string::npos ? std::string::npos : colon - 1));
        if (colon != std::string::npos) spec.loops = std::stoi(rest.substr(colon + 1));
      } catch (const std::logic_error&) {
        throw ParameterError("bad spiral map spec: " + name);
      }
    }
    auto f = std::make_shared<SpiralMap>(spec);
    return {name, f, f->domain().polygon};
  }
  auto f = std::make_shared<CatalogMap>(CatalogMap::parseKind(name));
  return {name, f, f->imagePolygon()};
}

}  // namespace holab
