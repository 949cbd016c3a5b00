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

// Geodesic zipper fitting of conformal maps onto polygons.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "holab/conformal.hpp"
#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"

namespace holab {

namespace zipper_detail {

// Square root in the closed upper half-plane; real results take the sign of `hint`.
inline Complex upperSqrt(Complex x, double hint) {
  Complex r = std::sqrt(x);
  if (r.imag() < 0.0) r = -r;
  if (r.imag() == 0.0 && hint < 0.0) r = -r;
  return r;
}

}  // namespace zipper_detail

// One slit-opening step. `b` is infinite for a vertical slit.
struct ZipStep {
  double b = 0.0;
  double c = 0.0;
  bool vertical = false;

  static ZipStep toZero(Complex a) {
    ZipStep s;
    s.c = std::norm(a) / a.imag();
    if (a.real() == 0.0) {
      s.vertical = true;
      s.c = a.imag();
    } else {
      s.b = std::norm(a) / a.real();
    }
    return s;
  }

  Complex moebius(Complex z) const { return vertical ? z : z / (1.0 - z / b); }

  Complex forward(Complex z) const {
    const Complex l = moebius(z);
    return zipper_detail::upperSqrt(l * l + c * c, l.real());
  }

  Complex forwardPrime(Complex z) const {
    const Complex l = moebius(z);
    const Complex lp = vertical ? Complex(1.0) : 1.0 / ((1.0 - z / b) * (1.0 - z / b));
    return l * lp / forward(z);
  }

  // Image of the point at infinity (finite unless vertical).
  double forwardInfinity() const {
    const double r = std::sqrt(b * b + c * c);
    return b > 0 ? -r : r;
  }

  // Inverse with derivative d(inverse)/dw in `deriv`.
  Complex inverse(Complex w, Complex* deriv) const {
    const Complex v = zipper_detail::upperSqrt(w * w - c * c, w.real());
    const Complex dv = w / v;
    if (vertical) {
      *deriv = dv;
      return v;
    }
    const Complex den = 1.0 + v / b;
    *deriv = dv / (den * den);
    return v / den;
  }
};

struct ZipperOptions {
  // Largest boundary mismatch, relative to the polygon scale, before the fit is rejected.
  double max_relative_mismatch = 0.05;
  int boundary_check_samples = 0;  // 0: four per boundary point
};

class ZipperMap final : public ConformalMap {
 public:
  ZipperMap() = default;

  std::string kind() const override { return "fitted"; }
  std::string name() const override { return "zipper"; }

  const PolygonDomain& polygon() const { return polygon_; }
  std::size_t resolution() const { return points_.size(); }
  const std::vector<Complex>& boundaryPoints() const { return points_; }
  double fitTolerance() const override { return fit_tolerance_; }

  Complex value(Complex z) const override {
    Complex d;
    return inverseChain(z, &d);
  }

  Complex derivative(Complex z) const override {
    Complex d;
    inverseChain(z, &d);
    return d;
  }

  Complex preimage(Complex w) const override {
    if (!polygon_.rawContains(w) && polygon_.unsignedBoundaryDistance(w) > fit_tolerance_)
      throw PositionError("point is not in the image domain");
    Complex d;
    Complex z = forwardChain(w, &d);
    if (std::abs(z) >= 1.0) z *= (1.0 - 1e-12) / std::abs(z);
    return z;
  }

  double boundaryDistance(Complex w) const override {
    const double d = polygon_.unsignedBoundaryDistance(w);
    return polygon_.rawContains(w) ? d : -d;
  }

  nlohmann::json toJson() const override {
    nlohmann::json j;
    j["kind"] = "zipper";
    j["polygon"] = polygon_.toJson();
    j["points"] = nlohmann::json::array();
    for (const auto& p : points_) j["points"].push_back({p.real(), p.imag()});
    j["steps"] = nlohmann::json::array();
    for (const auto& s : steps_) {
      if (s.vertical) j["steps"].push_back({nullptr, s.c});
      else j["steps"].push_back({s.b, s.c});
    }
    if (zeta_inf_) j["zeta_inf"] = *zeta_inf_;
    else j["zeta_inf"] = nullptr;
    j["sign"] = sign_;
    j["u_base"] = {u_base_.real(), u_base_.imag()};
    j["rotation"] = {rotation_.real(), rotation_.imag()};
    j["fit_tolerance"] = fit_tolerance_;
    return j;
  }

  static std::shared_ptr<ZipperMap> fromJson(const nlohmann::json& j) {
    try {
      auto m = std::make_shared<ZipperMap>();
      m->polygon_ = PolygonDomain::fromJson(j.at("polygon"));
      for (const auto& p : j.at("points")) m->points_.emplace_back(p[0].get<double>(), p[1].get<double>());
      for (const auto& s : j.at("steps")) {
        ZipStep st;
        st.c = s[1].get<double>();
        if (s[0].is_null()) st.vertical = true;
        else st.b = s[0].get<double>();
        m->steps_.push_back(st);
      }
      if (!j.at("zeta_inf").is_null()) m->zeta_inf_ = j.at("zeta_inf").get<double>();
      m->sign_ = j.at("sign").get<int>();
      m->u_base_ = {j.at("u_base")[0].get<double>(), j.at("u_base")[1].get<double>()};
      m->rotation_ = {j.at("rotation")[0].get<double>(), j.at("rotation")[1].get<double>()};
      m->fit_tolerance_ = j.at("fit_tolerance").get<double>();
      if (m->points_.size() < 3 || m->steps_.size() + 2 != m->points_.size())
        throw FormatError("zipper map JSON is inconsistent");
      return m;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("malformed zipper map JSON: ") + e.what());
    }
  }

  friend std::shared_ptr<ZipperMap> fitZipper(const PolygonDomain&, std::size_t, const ZipperOptions&);

 private:
  Complex firstMap(Complex w) const {
    return Complex(0, 1) * std::sqrt((w - points_[1]) / (w - points_[0]));
  }

  Complex firstMapPrime(Complex w, Complex image) const {
    const Complex r_prime = (points_[1] - points_[0]) / ((w - points_[0]) * (w - points_[0]));
    return -r_prime / (2.0 * image);
  }

  Complex finalMap(Complex z) const {
    const Complex q = zeta_inf_ ? z / (1.0 - z / *zeta_inf_) : z;
    return static_cast<double>(sign_) * q * q;
  }

  Complex finalMapPrime(Complex z) const {
    if (!zeta_inf_) return 2.0 * sign_ * z;
    const Complex den = 1.0 - z / *zeta_inf_;
    return 2.0 * sign_ * (z / den) / (den * den);
  }

  // Polygon -> disk, with derivative.
  Complex forwardChain(Complex w, Complex* deriv) const {
    Complex z = firstMap(w);
    Complex d = firstMapPrime(w, z);
    for (const auto& s : steps_) {
      d *= s.forwardPrime(z);
      z = s.forward(z);
    }
    d *= finalMapPrime(z);
    const Complex u = finalMap(z);
    const Complex ub = std::conj(u_base_);
    d *= (u_base_ - ub) / ((u - ub) * (u - ub));
    const Complex t = (u - u_base_) / (u - ub);
    *deriv = d / rotation_;
    return t / rotation_;
  }

  // Disk -> polygon, with derivative.
  Complex inverseChain(Complex z, Complex* deriv) const {
    const Complex omega = rotation_ * z;
    const Complex ub = std::conj(u_base_);
    Complex u = (u_base_ - omega * ub) / (1.0 - omega);
    Complex d = rotation_ * (u_base_ - ub) / ((1.0 - omega) * (1.0 - omega));
    Complex q = std::sqrt(u);
    if (sign_ < 0) q *= Complex(0, 1);
    d *= q / (2.0 * u);
    Complex x = q;
    if (zeta_inf_) {
      const Complex den = 1.0 + q / *zeta_inf_;
      x = q / den;
      d /= den * den;
    }
    for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
      Complex dd;
      x = it->inverse(x, &dd);
      d *= dd;
    }
    const Complex v = -x * x;
    d *= -2.0 * x;
    const Complex one_minus = 1.0 - v;
    d *= (points_[1] - points_[0]) / (one_minus * one_minus);
    *deriv = d;
    return (points_[1] - v * points_[0]) / one_minus;
  }

  PolygonDomain polygon_;
  std::vector<Complex> points_;
  std::vector<ZipStep> steps_;
  std::optional<double> zeta_inf_;
  int sign_ = 1;
  Complex u_base_{0, 1};
  Complex rotation_{1, 0};
  double fit_tolerance_ = 0.0;
};

// Boundary samples: every vertex plus evenly spread edge points, about `resolution` in total.
inline std::vector<Complex> sampleBoundary(const PolygonDomain& dom, std::size_t resolution) {
  const std::size_t n = dom.size();
  double perimeter = 0.0;
  for (std::size_t i = 0; i < n; ++i) perimeter += std::abs(dom.vertex(i + 1) - dom.vertex(i));
  const double spacing = perimeter / static_cast<double>(resolution);
  std::vector<Complex> pts;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = dom.vertex(i), b = dom.vertex(i + 1);
    const int pieces = std::max(1, static_cast<int>(std::round(std::abs(b - a) / spacing)));
    for (int k = 0; k < pieces; ++k) pts.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
  }
  return pts;
}

inline std::shared_ptr<ZipperMap> fitZipper(const PolygonDomain& dom, std::size_t resolution,
                                            const ZipperOptions& opt = {}) {
  if (resolution < dom.size()) throw ParameterError("fit resolution must be at least the vertex count");
  auto m = std::make_shared<ZipperMap>();
  m->polygon_ = dom;
  m->points_ = sampleBoundary(dom, resolution);
  const auto& pts = m->points_;
  const std::size_t n = pts.size();

  std::vector<Complex> img(n);
  for (std::size_t k = 2; k < n; ++k) img[k] = m->firstMap(pts[k]);
  Complex base = m->firstMap(dom.basepoint());
  std::optional<double> zinf;  // image of pts[0]; starts at infinity
  double worst_dip = 0.0;
  for (std::size_t k = 2; k < n; ++k) {
    Complex a = img[k];
    worst_dip = std::max(worst_dip, -a.imag());
    if (!(a.imag() > 0.0)) a = Complex(a.real(), std::max(std::abs(a) * 1e-14, 1e-300));
    const ZipStep st = ZipStep::toZero(a);
    for (std::size_t i = k + 1; i < n; ++i) {
      // Points already zipped sit on the real line; keep them there.
      Complex z = img[i];
      if (z.imag() < 0.0) z = Complex(z.real(), 0.0);
      img[i] = st.forward(z);
    }
    base = st.forward(base);
    if (zinf) {
      *zinf = st.forward(Complex(*zinf, 0.0)).real();
    } else if (!st.vertical) {
      zinf = st.forwardInfinity();
    }
    m->steps_.push_back(st);
  }
  if (!std::isfinite(base.real()) || !std::isfinite(base.imag()))
    throw FitError("zipper fit produced non-finite values");
  m->zeta_inf_ = zinf;
  const Complex qb = zinf ? base / (1.0 - base / *zinf) : base;
  m->sign_ = qb.real() > 0 ? 1 : -1;
  m->u_base_ = static_cast<double>(m->sign_) * qb * qb;
  if (!(m->u_base_.imag() > 0.0))
    throw FitError("zipper fit lost the basepoint (boundary too irregular for this resolution)");

  Complex d;
  m->rotation_ = 1.0;
  m->forwardChain(dom.basepoint(), &d);
  m->rotation_ = d / std::abs(d);

  // Boundary mismatch from images of circle points.
  const std::size_t checks = opt.boundary_check_samples > 0 ? opt.boundary_check_samples : 4 * n;
  double mismatch = 0.0;
  for (std::size_t i = 0; i < checks; ++i) {
    const double t = kTwoPi * (i + 0.5) / checks;
    Complex dd;
    const Complex w = m->inverseChain(std::polar(1.0 - 1e-13, t), &dd);
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) continue;
    mismatch = std::max(mismatch, dom.unsignedBoundaryDistance(w));
  }
  m->fit_tolerance_ = mismatch;
  if (!(mismatch <= opt.max_relative_mismatch * dom.scale()))
    throw FitError("zipper boundary mismatch " + std::to_string(mismatch) + " exceeds the budget (dip " +
                   std::to_string(worst_dip) + ")");
  return m;
}

inline std::shared_ptr<ZipperMap> fitConformal(const PolygonDomain& dom, std::size_t resolution) {
  return fitZipper(dom, resolution);
}

}  // namespace holab
