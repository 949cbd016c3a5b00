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

// Spiral domains g(t) = t^(alpha+1) exp(2 pi i t).
//
// The channel between consecutive loops is the exact image of the half-strip
//   S = { x + iy : x > 0, |y| < pi/2 }
// under the analytic map
//   F(zeta) = rho(tau) exp(2 pi i tau),  (tau + ts)^2 = (t0 + ts)^2 + 2 c zeta,
//   rho(tau) = (tau^beta + (tau + 1)^beta) / 2,  beta = alpha + 1,
// so the real axis of S runs along the midline between loop tau and loop
// tau + 1, and the walls y = -pi/2 (outer) and y = +pi/2 (inner) are thick
// copies of g. The wall fraction w sets the channel half-width to about
// (1 - w) beta tau^alpha / 2; the remaining fraction of each loop gap is wall.
// The polygon is F restricted to the rectangle [0, x(J+1)] x [-pi/2, pi/2],
// with a straight outer cap.

#pragma once

#include <cmath>
#include <vector>

#include "holab/errors.hpp"
#include "holab/geometry.hpp"
#include "holab/numerics.hpp"

namespace holab {

enum class ChannelClosure { kStraightCap };

struct SpiralSpec {
  double alpha = 0.0;
  int loops = 10;              // J
  int samples_per_loop = 128;  // wall samples per unit of tau
  ChannelClosure closure = ChannelClosure::kStraightCap;
  double wall_fraction = 0.4;
  double t_start = 0.5;  // tau at the inner cap
  double t_shift = 0.5;

  void validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("spiral alpha must be >= 0");
    if (loops < 2) throw ParameterError("spiral needs J >= 2 loops");
    if (samples_per_loop < 16) throw ParameterError("spiral needs >= 16 samples per loop");
    if (!(wall_fraction > 0.0 && wall_fraction < 1.0))
      throw ParameterError("spiral wall fraction must lie in (0, 1)");
    if (!(t_start > 0.0) || !(t_shift >= 0.0)) throw ParameterError("bad spiral start parameters");
  }
};

// Analytic channel map F from the half-strip onto the (untruncated) spiral channel.
class SpiralChannel {
 public:
  SpiralChannel() = default;

  explicit SpiralChannel(const SpiralSpec& spec) : spec_(spec) {
    spec.validate();
    beta_ = spec.alpha + 1.0;
    half_width_factor_ = (1.0 - spec.wall_fraction) * beta_ / 2.0;
    c_ = half_width_factor_ / (kPi * kPi);
    base_ = spec.t_start + spec.t_shift;
    buildSeeds();
  }

  const SpiralSpec& spec() const { return spec_; }
  double beta() const { return beta_; }
  double speed() const { return c_; }

  // Strip abscissa of the midline point at real parameter tau.
  double stripX(double tau) const {
    const double u = tau + spec_.t_shift;
    return (u * u - base_ * base_) / (2.0 * c_);
  }

  Complex tau(Complex zeta) const { return std::sqrt(base_ * base_ + 2.0 * c_ * zeta) - spec_.t_shift; }

  Complex rho(Complex t) const { return 0.5 * (std::pow(t, beta_) + std::pow(t + 1.0, beta_)); }

  Complex rhoPrime(Complex t) const {
    return 0.5 * beta_ * (std::pow(t, beta_ - 1.0) + std::pow(t + 1.0, beta_ - 1.0));
  }

  Complex curve(Complex t) const { return rho(t) * std::exp(Complex(0, kTwoPi) * t); }

  Complex curvePrime(Complex t) const {
    return (rhoPrime(t) + Complex(0, kTwoPi) * rho(t)) * std::exp(Complex(0, kTwoPi) * t);
  }

  Complex operator()(Complex zeta) const { return curve(tau(zeta)); }

  Complex derivative(Complex zeta) const {
    const Complex t = tau(zeta);
    return curvePrime(t) * (c_ / (t + spec_.t_shift));
  }

  // Preimage in the half-strip. Throws PositionError when w is not in the channel.
  Complex inverse(Complex w) const {
    // Seed from the nearest midline sample.
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t i = 0; i < seed_points_.size(); ++i) {
      const double d = std::abs(seed_points_[i] - w);
      if (d < best_d) best_d = d, best = i;
    }
    Complex t = seed_tau_[best];
    for (int iter = 0; iter < 100; ++iter) {
      const Complex r = curve(t) - w;
      Complex step = r / curvePrime(t);
      // Damp to a fraction of a loop per step.
      if (std::abs(step) > 0.1) step *= 0.1 / std::abs(step);
      t -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    if (std::abs(curve(t) - w) > 1e-9 * std::max(1.0, std::abs(w)))
      throw NumericError("spiral channel inverse did not converge");
    const Complex u = t + spec_.t_shift;
    const Complex zeta = (u * u - base_ * base_) / (2.0 * c_);
    if (zeta.real() < -1e-9 || std::abs(zeta.imag()) > kPi / 2 + 1e-9)
      throw PositionError("point is not inside the spiral channel");
    return zeta;
  }

 private:
  void buildSeeds() {
    // Covers tau up to a generous bound; inverse() is only asked about the truncated channel.
    const double t_end = spec_.loops + 2.0;
    const int per_loop = 32;
    for (double t = spec_.t_start; t <= t_end; t += 1.0 / per_loop) {
      for (double y : {-0.35 * kPi, 0.0, 0.35 * kPi}) {
        const Complex zeta(stripX(t), y);
        seed_tau_.push_back(tau(zeta));
        seed_points_.push_back((*this)(zeta));
      }
    }
  }

  SpiralSpec spec_;
  double beta_ = 1.0;
  double half_width_factor_ = 0.3;
  double c_ = 0.03;
  double base_ = 1.0;
  std::vector<Complex> seed_tau_, seed_points_;
};

struct SpiralDomain {
  SpiralSpec spec;
  SpiralChannel channel;
  PolygonDomain polygon;
  std::vector<Complex> midline;
  std::vector<double> midline_tau;
  std::vector<Complex> loop_centers;  // c_j for j = 1..J-1
  double strip_length = 0.0;          // x at the outer cap
  Complex basepoint_strip;            // preimage of the basepoint in the half-strip

  // Strip abscissa of the loop center c_j.
  double loopCenterStripX(int j) const { return channel.stripX(static_cast<double>(j)); }

  // Smallest channel width along the midline, away from the two caps.
  double minChannelWidth() const {
    double best = INFINITY;
    for (std::size_t i = 0; i < midline.size(); ++i) {
      const double t = midline_tau[i];
      if (t < spec.t_start + 0.1 || t > spec.loops + 0.9) continue;
      best = std::min(best, 2.0 * polygon.unsignedBoundaryDistance(midline[i]));
    }
    return best;
  }
};

// Builds the truncated spiral polygon, midline and loop centers.
inline SpiralDomain buildSpiralDomain(const SpiralSpec& spec) {
  spec.validate();
  SpiralDomain out;
  out.spec = spec;
  out.channel = SpiralChannel(spec);
  const auto& F = out.channel;
  const double t_end = spec.loops + 1.0;
  const int steps = static_cast<int>(std::ceil((t_end - spec.t_start) * spec.samples_per_loop));
  std::vector<double> taus(steps + 1);
  for (int i = 0; i <= steps; ++i) taus[i] = spec.t_start + (t_end - spec.t_start) * i / steps;
  out.strip_length = F.stripX(t_end);

  const double half = kPi / 2;
  std::vector<Complex> verts;
  double sagitta = 0.0;
  auto wall = [&](double tau, double y) { return F(Complex(F.stripX(tau), y)); };
  for (int i = 0; i <= steps; ++i) {
    verts.push_back(wall(taus[i], -half));
    if (i > 0) {
      const Complex mid = wall(0.5 * (taus[i - 1] + taus[i]), -half);
      sagitta = std::max(sagitta, segmentDistance(mid, verts[verts.size() - 2], verts.back()));
    }
  }
  for (int i = steps; i >= 0; --i) {
    verts.push_back(wall(taus[i], half));
    if (i < steps) {
      const Complex mid = wall(0.5 * (taus[i + 1] + taus[i]), half);
      sagitta = std::max(sagitta, segmentDistance(mid, verts[verts.size() - 2], verts.back()));
    }
  }
  // Inner cap: image of the segment x = 0.
  const int cap = 8;
  for (int k = 1; k < cap; ++k) verts.push_back(F(Complex(0.0, half - kPi * k / cap)));

  out.basepoint_strip = Complex(std::asinh(1.0), 0.0);
  out.polygon = PolygonDomain::create(std::move(verts), F(out.basepoint_strip));
  out.polygon.setChordTolerance(sagitta);

  for (double t : taus) {
    out.midline_tau.push_back(t);
    out.midline.push_back(F(Complex(F.stripX(t), 0.0)));
  }
  for (int j = 1; j <= spec.loops - 1; ++j)
    out.loop_centers.push_back(F(Complex(F.stripX(static_cast<double>(j)), 0.0)));
  return out;
}

}  // namespace holab
