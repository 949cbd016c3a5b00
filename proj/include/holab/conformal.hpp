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

// Conformal maps of the unit disk and the analytic catalog.

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/diskpoint.hpp"
#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"

namespace holab {

// Injective analytic map f from the unit disk onto a simply connected domain.
class ConformalMap {
 public:
  virtual ~ConformalMap() = default;

  // "analytic-catalog" or "fitted".
  virtual std::string kind() const = 0;
  virtual std::string name() const = 0;

  // Unchecked evaluation for |z| < 1.
  virtual Complex value(Complex z) const = 0;
  virtual Complex derivative(Complex z) const = 0;
  // Unchecked preimage; callers go through invert().
  virtual Complex preimage(Complex w) const = 0;

  // Deep evaluation. Maps without an exact deep form need shallow points.
  virtual Complex valueAt(const DiskPoint& p) const { return value(p.toComplex()); }
  // f'(z) (1 - |z|).
  virtual Complex scaledDerivativeAt(const DiskPoint& p) const {
    return derivative(p.toComplex()) * p.epsilon();
  }
  virtual DiskPoint preimageAt(Complex w) const { return DiskPoint::fromComplex(invert(w)); }

  // Boundary directions where f is unbounded or turns sharply; circle
  // quadrature grades toward them.
  virtual std::vector<double> singularDirections() const { return {}; }

  // Distance from w to the boundary of the image domain.
  virtual double boundaryDistance(Complex w) const = 0;

  // Measured boundary mismatch (0 for closed forms).
  virtual double fitTolerance() const { return 0.0; }

  virtual nlohmann::json toJson() const = 0;

  Complex eval(Complex z) const {
    checkDisk(z);
    return value(z);
  }

  Complex deriv(Complex z) const {
    checkDisk(z);
    return derivative(z);
  }

  // Preimage with |f(z) - w| <= 1e-8 max(1, |w|), polished by Newton steps.
  Complex invert(Complex w) const {
    Complex z = preimage(w);
    const double tol = 1e-8 * std::max(1.0, std::abs(w));
    for (int iter = 0; iter < 30 && std::abs(value(z) - w) > 0.01 * tol; ++iter) {
      Complex step = (value(z) - w) / derivative(z);
      // Stay inside the disk.
      const double room = 1.0 - std::abs(z);
      if (std::abs(step) > 0.5 * room) step *= 0.5 * room / std::abs(step);
      z -= step;
    }
    if (!(std::abs(z) < 1.0)) throw PositionError("point is not in the image domain");
    if (!(std::abs(value(z) - w) <= tol)) throw NumericError("map inversion did not converge");
    return z;
  }

 protected:
  static void checkDisk(Complex z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("map argument must lie in the open unit disk");
  }
};

using MapPtr = std::shared_ptr<const ConformalMap>;

// Value at r_max ω with the Cauchy diagnostic |f(r_max ω) - f(r' ω)|, r' = 1 - 2(1 - r_max).
struct BoundaryValue {
  Complex value;
  double cauchy = 0.0;
};

inline BoundaryValue radialBoundaryValue(const ConformalMap& f, Complex omega, double r_max) {
  if (!(r_max >= 0.9 && r_max < 1.0)) throw ParameterError("r_max must lie in [0.9, 1)");
  const Complex u = omega / std::abs(omega);
  const Complex v = f.eval(r_max * u);
  const double r2 = 1.0 - 2.0 * (1.0 - r_max);
  return {v, std::abs(v - f.eval(r2 * u))};
}

enum class CatalogKind { kIdentity, kKoebe, kHalfPlane, kRadialSlitDisk, kStripLog };

class CatalogMap final : public ConformalMap {
 public:
  // `param` is the slit base for the radial-slit disk and ignored otherwise.
  explicit CatalogMap(CatalogKind kind, double param = 0.5) : kind_(kind), param_(param) {
    if (kind == CatalogKind::kRadialSlitDisk) {
      if (!(param > 0.0 && param < 1.0)) throw ParameterError("slit base must lie in (0, 1)");
      q_ = param / ((1.0 + param) * (1.0 + param));
    }
  }

  static CatalogKind parseKind(const std::string& name) {
    if (name == "identity") return CatalogKind::kIdentity;
    if (name == "koebe") return CatalogKind::kKoebe;
    if (name == "half-plane") return CatalogKind::kHalfPlane;
    if (name == "radial-slit-disk") return CatalogKind::kRadialSlitDisk;
    if (name == "strip-log") return CatalogKind::kStripLog;
    throw ParameterError("unknown catalog map: " + name);
  }

  CatalogKind catalogKind() const { return kind_; }
  double param() const { return param_; }

  std::string kind() const override { return "analytic-catalog"; }

  std::string name() const override {
    switch (kind_) {
      case CatalogKind::kIdentity: return "identity";
      case CatalogKind::kKoebe: return "koebe";
      case CatalogKind::kHalfPlane: return "half-plane";
      case CatalogKind::kRadialSlitDisk: return "radial-slit-disk";
      case CatalogKind::kStripLog: return "strip-log";
    }
    return "";
  }

  Complex value(Complex z) const override {
    switch (kind_) {
      case CatalogKind::kIdentity: return z;
      case CatalogKind::kKoebe: return z / ((1.0 - z) * (1.0 - z));
      case CatalogKind::kHalfPlane: return 2.0 * z / (1.0 - z);
      case CatalogKind::kRadialSlitDisk: return slitInverse(4.0 * q_ * slit(z));
      case CatalogKind::kStripLog: return std::log((1.0 + z) / (1.0 - z));
    }
    return z;
  }

  Complex derivative(Complex z) const override {
    switch (kind_) {
      case CatalogKind::kIdentity: return 1.0;
      case CatalogKind::kKoebe: return (1.0 + z) / std::pow(1.0 - z, 3);
      case CatalogKind::kHalfPlane: return 2.0 / ((1.0 - z) * (1.0 - z));
      case CatalogKind::kRadialSlitDisk: return 4.0 * q_ * slitPrime(z) / slitPrime(value(z));
      case CatalogKind::kStripLog: return 2.0 / (1.0 - z * z);
    }
    return 1.0;
  }

  Complex preimage(Complex w) const override {
    if (boundaryDistance(w) <= 0.0) throw PositionError("point is not in the image domain");
    switch (kind_) {
      case CatalogKind::kIdentity: return w;
      case CatalogKind::kKoebe: {
        const Complex s = std::sqrt(1.0 + 4.0 * w);
        return (s - 1.0) / (s + 1.0);
      }
      case CatalogKind::kHalfPlane: return w / (2.0 + w);
      case CatalogKind::kRadialSlitDisk: return slitInverse(slit(w) / (4.0 * q_));
      case CatalogKind::kStripLog: return std::tanh(w / 2.0);
    }
    return w;
  }

  std::vector<double> singularDirections() const override {
    switch (kind_) {
      case CatalogKind::kIdentity: return {};
      case CatalogKind::kStripLog: return {0.0, kPi};
      default: return {0.0};
    }
  }

  // Signed: negative outside the image domain.
  double boundaryDistance(Complex w) const override {
    switch (kind_) {
      case CatalogKind::kIdentity: return 1.0 - std::abs(w);
      case CatalogKind::kKoebe:
        if (w.real() >= -0.25) return std::abs(w + 0.25);
        return std::abs(w.imag());
      case CatalogKind::kHalfPlane: return w.real() + 1.0;
      case CatalogKind::kRadialSlitDisk:
        return std::min(1.0 - std::abs(w), segmentDistance(w, param_, 1.0));
      case CatalogKind::kStripLog: return kPi / 2 - std::abs(w.imag());
    }
    return 0.0;
  }

  nlohmann::json toJson() const override {
    return {{"kind", "catalog"}, {"name", name()}, {"param", param_}};
  }

  // Polygon for domain-side computations. Bounded images get a fine inscribed
  // polygon; unbounded ones are truncated at `extent`.
  PolygonDomain imagePolygon(double extent = 0.0) const {
    switch (kind_) {
      case CatalogKind::kIdentity: {
        auto dom = regularPolygon(1024);
        dom.setChordTolerance(1.0 - std::cos(kPi / 1024));
        return dom;
      }
      case CatalogKind::kKoebe: {
        const double radius = extent > 0 ? extent : 1e10;
        const int n = 256;
        const double notch = 1e-7;
        std::vector<Complex> v;
        v.push_back(-0.25);
        for (int k = 0; k < n; ++k) {
          const double t = -kPi + notch + (kTwoPi - 2 * notch) * k / (n - 1);
          v.push_back(std::polar(radius / std::cos(kPi / n), t));
        }
        return PolygonDomain::create(std::move(v), 0.0);
      }
      case CatalogKind::kHalfPlane: {
        const double x = extent > 0 ? extent : 1e6;
        return PolygonDomain::create({{-1, -x}, {x, -x}, {x, x}, {-1, x}}, 0.0);
      }
      case CatalogKind::kRadialSlitDisk: {
        const int n = 1024;
        const double notch = 1e-6;
        std::vector<Complex> v;
        v.push_back(param_);
        for (int k = 0; k < n; ++k) v.push_back(std::polar(1.0, notch + (kTwoPi - 2 * notch) * k / (n - 1)));
        auto dom = PolygonDomain::create(std::move(v), 0.0);
        dom.setChordTolerance(1.0 - std::cos(kPi / (n - 1)));
        return dom;
      }
      case CatalogKind::kStripLog: {
        const double x = extent > 0 ? extent : 50.0;
        const double h = kPi / 2;
        return PolygonDomain::create({{-x, -h}, {x, -h}, {x, h}, {-x, h}}, 0.0);
      }
    }
    throw ParameterError("no polygon for this map");
  }

 private:
  // z / (1 + z)^2 maps the disk onto the plane minus [1/4, inf).
  static Complex slit(Complex z) { return z / ((1.0 + z) * (1.0 + z)); }
  static Complex slitPrime(Complex z) { return (1.0 - z) / std::pow(1.0 + z, 3); }
  static Complex slitInverse(Complex w) {
    const Complex s = std::sqrt(1.0 - 4.0 * w);
    return (1.0 - s) / (1.0 + s);
  }

  CatalogKind kind_;
  double param_;
  double q_ = 0.0;
};

inline MapPtr catalogMap(const std::string& name, double param = 0.5) {
  return std::make_shared<CatalogMap>(CatalogMap::parseKind(name), param);
}

// f + shift.
class TranslatedMap final : public ConformalMap {
 public:
  TranslatedMap(MapPtr base, Complex shift) : base_(std::move(base)), shift_(shift) {}

  std::string kind() const override { return "translated"; }
  std::string name() const override { return base_->name() + "+shift"; }
  Complex value(Complex z) const override { return base_->value(z) + shift_; }
  Complex derivative(Complex z) const override { return base_->derivative(z); }
  Complex preimage(Complex w) const override { return base_->preimage(w - shift_); }
  Complex valueAt(const DiskPoint& p) const override { return base_->valueAt(p) + shift_; }
  Complex scaledDerivativeAt(const DiskPoint& p) const override { return base_->scaledDerivativeAt(p); }
  DiskPoint preimageAt(Complex w) const override { return base_->preimageAt(w - shift_); }
  std::vector<double> singularDirections() const override { return base_->singularDirections(); }
  double boundaryDistance(Complex w) const override { return base_->boundaryDistance(w - shift_); }
  double fitTolerance() const override { return base_->fitTolerance(); }
  nlohmann::json toJson() const override {
    return {{"kind", "translated"}, {"shift", {shift_.real(), shift_.imag()}}, {"base", base_->toJson()}};
  }

  const MapPtr& base() const { return base_; }
  Complex shift() const { return shift_; }

 private:
  MapPtr base_;
  Complex shift_;
};

}  // namespace holab
