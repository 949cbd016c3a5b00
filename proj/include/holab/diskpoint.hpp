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

// Points of the unit disk in log-depth coordinates.

#pragma once

#include <cmath>

#include "holab/errors.hpp"
#include "holab/numerics.hpp"

namespace holab {

// Depth beyond which 1 - |z| is no longer resolved by a double z.
inline constexpr double kMaxShallowDepth = 34.0;

// z = (1 - e^{-s}) exp(i (theta + e^{-s} fine)).
//
// Keeping the depth s and the angular offset `fine` (in units of 1 - |z|)
// separate lets maps with an exact deep form evaluate points whose distance
// to the circle underflows.
struct DiskPoint {
  double s = 0.0;
  double theta = 0.0;
  double fine = 0.0;

  double epsilon() const { return std::exp(-s); }
  double radius() const { return -std::expm1(-s); }
  double angle() const { return theta + std::exp(-s) * fine; }
  bool shallow() const { return s <= kMaxShallowDepth; }

  Complex toComplex() const {
    if (!shallow()) throw ResolutionError("disk point too close to the circle for a double");
    return std::polar(radius(), angle());
  }

  static DiskPoint fromComplex(Complex z) {
    const double r = std::abs(z);
    if (!(r < 1.0)) throw DomainError("point is not inside the unit disk");
    return {-std::log1p(-r), std::arg(z), 0.0};
  }

  // Point at depth s whose angle is `base + e^{-s} phi`. The offset stays in
  // `fine` while it is too small to add to `base` without loss.
  static DiskPoint offset(double s, double base, double phi) {
    const double shift = std::exp(-s) * phi;
    if (std::abs(shift) < 1e-6) return {s, base, phi};
    return {s, base + shift, 0.0};
  }
};

// Hyperbolic distance from 0, log((1 + |z|) / (1 - |z|)).
inline double hyperbolicDepth(const DiskPoint& p) { return std::log(2.0 - p.epsilon()) + p.s; }

inline double wrapAngle(double a) {
  a = std::remainder(a, kTwoPi);
  return a <= -kPi ? a + kTwoPi : a;
}

}  // namespace holab
