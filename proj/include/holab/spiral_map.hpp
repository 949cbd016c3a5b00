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

// Exact conformal map of the disk onto the spiral channel.

#pragma once

#include <cmath>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "holab/conformal.hpp"
#include "holab/diskpoint.hpp"
#include "holab/spiral.hpp"

namespace holab {

// f(z) = F(asinh((1 + z') / (1 - z'))), z' = e^{i gamma} z, where F maps the
// half-strip onto the untruncated channel. The spiral polygon is the
// truncation of that image; deep points near the channel end are tracked in
// log-depth form.
class SpiralMap final : public ConformalMap {
 public:
  explicit SpiralMap(const SpiralSpec& spec)
      : domain_(std::make_shared<SpiralDomain>(buildSpiralDomain(spec))) {
    init();
  }

  explicit SpiralMap(std::shared_ptr<const SpiralDomain> domain) : domain_(std::move(domain)) { init(); }

  std::string kind() const override { return "analytic-catalog"; }
  std::string name() const override { return "spiral"; }

  const SpiralDomain& domain() const { return *domain_; }
  std::shared_ptr<const SpiralDomain> domainPtr() const { return domain_; }
  double rotation() const { return gamma_; }
  // Direction of the channel end.
  double deepDirection() const { return wrapAngle(-gamma_); }

  // Half-strip coordinate of a disk point.
  Complex stripPoint(const DiskPoint& p) const { return stripFromLog(logOneMinus(p)); }

  Complex value(Complex z) const override { return valueAt(DiskPoint::fromComplex(z)); }

  Complex derivative(Complex z) const override {
    const DiskPoint p = DiskPoint::fromComplex(z);
    return scaledDerivativeAt(p) / p.epsilon();
  }

  Complex preimage(Complex w) const override { return preimageAt(w).toComplex(); }

  Complex valueAt(const DiskPoint& p) const override { return domain_->channel(stripPoint(p)); }

  Complex scaledDerivativeAt(const DiskPoint& p) const override {
    const Complex L = logOneMinus(p);
    const Complex log_u = logU(L);
    const Complex zeta = stripFromLog(L);
    // d zeta / dz' = 2 / ((1 - z')^2 sqrt(1 + u^2)).
    Complex half_log;  // log sqrt(1 + u^2)
    if (log_u.real() > 20.0) {
      half_log = log_u + 0.5 * log1pComplex(std::exp(-2.0 * log_u));
    } else {
      const Complex u = std::exp(log_u);
      half_log = std::log(std::sqrt(1.0 + u * u));
    }
    const Complex log_scale = std::log(2.0) - 2.0 * L - half_log - p.s;
    return domain_->channel.derivative(zeta) * std::exp(log_scale) * std::polar(1.0, gamma_);
  }

  DiskPoint preimageAt(Complex w) const override {
    const Complex zeta = domain_->channel.inverse(w);
    // u = sinh(zeta); 1 - z' = 2 / (u + 1).
    Complex L;
    if (zeta.real() > 20.0) {
      const Complex log_u = zeta - std::log(2.0) + log1pComplex(-std::exp(-2.0 * zeta));
      L = std::log(2.0) - log_u - log1pComplex(std::exp(-log_u));
    } else {
      L = std::log(2.0 / (std::sinh(zeta) + 1.0));
    }
    const double mod = std::exp(L.real());
    const double arg = L.imag();
    const double cos_arg = std::cos(arg);
    const double gap = 2.0 * cos_arg - mod;  // (1 - |z'|^2) / |1 - z'|
    if (!(gap > 0.0)) throw PositionError("point is not in the image domain");
    const double one_minus_r2 = mod * gap;
    const double r = std::sqrt(std::max(0.0, 1.0 - one_minus_r2));
    const double s = -(L.real() + std::log(gap) - std::log1p(r));
    const double theta0 = deepDirection();
    if (mod < 1e-8) {
      // arg(1 - w) = -Im w (1 + O(|w|)) with w = 1 - z'.
      const double fine = -std::exp(L.real() + s) * std::sin(arg) * (1.0 + mod * std::cos(arg));
      return DiskPoint::offset(s, theta0, fine);
    }
    const Complex zp = 1.0 - std::exp(L);
    return {s, wrapAngle(std::arg(zp) - gamma_), 0.0};
  }

  std::vector<double> singularDirections() const override { return {deepDirection()}; }

  double boundaryDistance(Complex w) const override {
    const auto& poly = domain_->polygon;
    const double d = poly.unsignedBoundaryDistance(w);
    return poly.rawContains(w) ? d : -d;
  }

  double fitTolerance() const override { return domain_->polygon.chordTolerance(); }

  nlohmann::json toJson() const override {
    const auto& s = domain_->spec;
    return {{"kind", "spiral"},
            {"alpha", s.alpha},
            {"loops", s.loops},
            {"samples_per_loop", s.samples_per_loop},
            {"wall_fraction", s.wall_fraction},
            {"t_start", s.t_start},
            {"t_shift", s.t_shift}};
  }

  static SpiralSpec specFromJson(const nlohmann::json& j) {
    SpiralSpec s;
    s.alpha = j.at("alpha").get<double>();
    s.loops = j.at("loops").get<int>();
    s.samples_per_loop = j.value("samples_per_loop", s.samples_per_loop);
    s.wall_fraction = j.value("wall_fraction", s.wall_fraction);
    s.t_start = j.value("t_start", s.t_start);
    s.t_shift = j.value("t_shift", s.t_shift);
    return s;
  }

 private:
  void init() {
    const Complex z0(std::asinh(1.0), 0.0);
    // d zeta / dz' at 0 is sqrt(2).
    const Complex d = domain_->channel.derivative(z0) * std::sqrt(2.0);
    gamma_ = -std::arg(d);
  }

  // log(1 - z'), accurate for points whose distance to the circle underflows.
  Complex logOneMinus(const DiskPoint& p) const {
    const double a0 = wrapAngle(p.theta + gamma_);
    const double eps = p.epsilon();
    const double A = a0 + eps * p.fine;
    const Complex half_turn = std::polar(1.0, A / 2);
    // 1 - z' = eps e^{iA/2} (e^{iA/2} - i X), X = 2 sin(A/2) / eps.
    if (a0 == 0.0) {
      const double h = eps * p.fine / 2;
      const double sinc = h == 0.0 ? 1.0 : std::sin(h) / h;
      const double X = p.fine * sinc;
      return -p.s + Complex(0, A / 2) + std::log(half_turn - Complex(0, X));
    }
    const double sn = std::sin(A / 2);
    const double log_x = std::log(2.0 * std::abs(sn)) + p.s;
    if (log_x < 600.0) {
      const double X = 2.0 * sn / eps;
      return -p.s + Complex(0, A / 2) + std::log(half_turn - Complex(0, X));
    }
    const double sg = sn > 0 ? 1.0 : -1.0;
    return Complex(std::log(2.0 * std::abs(sn)), A / 2 - sg * kPi / 2);
  }

  // log u, u = (1 + z') / (1 - z') = (2 - w) / w with w = 1 - z'.
  static Complex logU(Complex L) {
    const Complex w = std::exp(L);
    return std::log(2.0 - w) - L;
  }

  static Complex stripFromLog(Complex L) {
    const Complex log_u = logU(L);
    if (log_u.real() > 20.0) return log_u + log1pComplex(std::sqrt(1.0 + std::exp(-2.0 * log_u)));
    // Re u >= 0 on the disk; a real part lost to rounding lands on the cut.
    const Complex z = std::asinh(std::exp(log_u));
    return z.real() < 0 ? Complex(-z.real(), z.imag()) : z;
  }

  std::shared_ptr<const SpiralDomain> domain_;
  double gamma_ = 0.0;
};

}  // namespace holab
