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

// Growth functions psi: [0, inf) -> [0, inf), strictly increasing with
// psi(0) = 0, and a grid-based doubling classifier.
//
// Values are finite for finite arguments; the extended value psi = inf
// is not represented.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "holab/errors.hpp"
#include "holab/numerics.hpp"

namespace holab {

enum class GrowthKind { kPower, kExpAlpha, kTable };

class GrowthFunction {
 public:
  // t^p, p > 0.
  static GrowthFunction power(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("power growth needs p > 0");
    GrowthFunction g;
    g.kind_ = GrowthKind::kPower;
    g.param_ = p;
    return g;
  }

  // exp(t^(2/(1+alpha))) - 1, alpha >= 0.
  static GrowthFunction expAlpha(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
      throw ParameterError("exp-alpha growth needs alpha >= 0");
    GrowthFunction g;
    g.kind_ = GrowthKind::kExpAlpha;
    g.param_ = alpha;
    return g;
  }

  // Monotone cubic (Fritsch-Carlson) interpolant of strictly increasing
  // samples. A missing (0, 0) sample is prepended. Extrapolates linearly
  // with the last slope.
  static GrowthFunction table(std::vector<double> ts, std::vector<double> vs) {
    if (ts.size() != vs.size() || ts.empty())
      throw ParameterError("table growth needs matching, nonempty columns");
    if (ts.front() != 0.0) {
      if (ts.front() < 0.0) throw ParameterError("table growth arguments must be >= 0");
      ts.insert(ts.begin(), 0.0);
      vs.insert(vs.begin(), 0.0);
    } else if (vs.front() != 0.0) {
      throw ParameterError("table growth must satisfy psi(0) = 0");
    }
    if (ts.size() < 2) throw ParameterError("table growth needs at least two samples");
    for (std::size_t i = 1; i < ts.size(); ++i) {
      if (!(ts[i] > ts[i - 1]) || !(vs[i] > vs[i - 1]))
        throw ParameterError("table growth samples must be strictly increasing");
    }
    GrowthFunction g;
    g.kind_ = GrowthKind::kTable;
    g.table_t_ = std::move(ts);
    g.table_v_ = std::move(vs);
    g.buildSlopes();
    return g;
  }

  // Reads "t,psi" rows; blank lines and '#' comments are skipped.
  static GrowthFunction tableFromCsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open growth table: " + path);
    std::vector<double> ts, vs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream row(line);
      double t, v;
      if (!(row >> t >> v)) {
        if (ts.empty()) continue;  // header row
        throw FormatError("malformed growth table row: " + line);
      }
      ts.push_back(t);
      vs.push_back(v);
    }
    return table(std::move(ts), std::move(vs));
  }

  // Parses "pow:<p>", "expalpha:<alpha>" or "table:<path>".
  static GrowthFunction parse(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw ParameterError("growth spec needs kind:value");
    const std::string kind(spec.substr(0, colon));
    const std::string value(spec.substr(colon + 1));
    if (kind == "table") return tableFromCsv(value);
    double x;
    try {
      std::size_t used = 0;
      x = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParameterError("bad growth parameter: " + value);
    }
    if (kind == "pow") return power(x);
    if (kind == "expalpha") return expAlpha(x);
    throw ParameterError("unknown growth kind: " + kind);
  }

  GrowthKind kind() const { return kind_; }
  double parameter() const { return param_; }

  std::string spec() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case GrowthKind::kPower: os << "pow:" << param_; break;
      case GrowthKind::kExpAlpha: os << "expalpha:" << param_; break;
      case GrowthKind::kTable: os << "table:<" << table_t_.size() << " samples>"; break;
    }
    return os.str();
  }

  double operator()(double t) const { return evaluate(t); }

  double evaluate(double t) const {
    checkArgument(t);
    switch (kind_) {
      case GrowthKind::kPower: return std::pow(t, param_);
      case GrowthKind::kExpAlpha: return std::expm1(std::pow(t, expAlphaExponent()));
      case GrowthKind::kTable: return tableValue(t);
    }
    return 0.0;
  }

  // log(psi(t)); -inf at t = 0. Finite where psi itself overflows.
  double logEvaluate(double t) const {
    checkArgument(t);
    if (t == 0.0) return kNegInf;
    switch (kind_) {
      case GrowthKind::kPower: return param_ * std::log(t);
      case GrowthKind::kExpAlpha: {
        const double u = std::pow(t, expAlphaExponent());
        if (u > 30.0) return u + std::log1p(-std::exp(-u));
        return std::log(std::expm1(u));
      }
      case GrowthKind::kTable: return std::log(tableValue(t));
    }
    return kNegInf;
  }

  double derivative(double t) const {
    checkArgument(t);
    switch (kind_) {
      case GrowthKind::kPower:
        if (t == 0.0) return param_ < 1.0 ? INFINITY : (param_ == 1.0 ? 1.0 : 0.0);
        return param_ * std::pow(t, param_ - 1.0);
      case GrowthKind::kExpAlpha: {
        const double q = expAlphaExponent();
        if (t == 0.0) return q < 1.0 ? INFINITY : (q == 1.0 ? 1.0 : 0.0);
        return q * std::pow(t, q - 1.0) * std::exp(std::pow(t, q));
      }
      case GrowthKind::kTable: return tableDerivative(t);
    }
    return 0.0;
  }

  // psi(2t)/psi(t); closed form for the power kind.
  double doublingRatio(double t) const {
    if (kind_ == GrowthKind::kPower) return std::exp2(param_);
    return std::exp(logEvaluate(2.0 * t) - logEvaluate(t));
  }

  double logDoublingRatio(double t) const {
    if (kind_ == GrowthKind::kPower) return param_ * std::log(2.0);
    return logEvaluate(2.0 * t) - logEvaluate(t);
  }

  // 2/(1+alpha) for the exp-alpha kind.
  double expAlphaExponent() const { return 2.0 / (1.0 + param_); }

 private:
  GrowthFunction() = default;

  static void checkArgument(double t) {
    if (!(t >= 0.0)) throw DomainError("growth function argument must be >= 0");
  }

  void buildSlopes() {
    const std::size_t n = table_t_.size();
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      delta[i] = (table_v_[i + 1] - table_v_[i]) / (table_t_[i + 1] - table_t_[i]);
    slopes_.assign(n, 0.0);
    slopes_[0] = delta[0];
    slopes_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      // Harmonic mean keeps the interpolant monotone; all deltas are positive.
      const double h0 = table_t_[i] - table_t_[i - 1], h1 = table_t_[i + 1] - table_t_[i];
      const double w1 = 2 * h1 + h0, w2 = h1 + 2 * h0;
      slopes_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }

  std::size_t segment(double t) const {
    auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
    std::size_t i = it == table_t_.begin() ? 0 : static_cast<std::size_t>(it - table_t_.begin()) - 1;
    return std::min(i, table_t_.size() - 2);
  }

  double tableValue(double t) const {
    if (t >= table_t_.back())
      return table_v_.back() + slopes_.back() * (t - table_t_.back());
    const std::size_t i = segment(t);
    const double h = table_t_[i + 1] - table_t_[i];
    const double s = (t - table_t_[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    return h00 * table_v_[i] + h10 * h * slopes_[i] + h01 * table_v_[i + 1] +
           h11 * h * slopes_[i + 1];
  }

  double tableDerivative(double t) const {
    if (t >= table_t_.back()) return slopes_.back();
    const std::size_t i = segment(t);
    const double h = table_t_[i + 1] - table_t_[i];
    const double s = (t - table_t_[i]) / h;
    const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
    const double d01 = -6 * s * s + 6 * s, d11 = 3 * s * s - 2 * s;
    return (d00 * table_v_[i] + d01 * table_v_[i + 1]) / h + d10 * slopes_[i] +
           d11 * slopes_[i + 1];
  }

  GrowthKind kind_ = GrowthKind::kPower;
  double param_ = 1.0;
  std::vector<double> table_t_, table_v_, slopes_;
};

struct DoublingResult {
  bool bounded = true;
  double constant = 0.0;  // grid supremum of psi(2t)/psi(t), or the cap when unbounded
  double cap = 1e12;
  double t_max = 0.0;
  std::size_t samples = 0;
};

// Supremum of psi(2t)/psi(t) over a log-spaced grid on [t_max * 1e-8, t_max].
// Grid points with psi(t) < 1e-300 are skipped.
inline DoublingResult doublingConstant(const GrowthFunction& psi, double t_max,
                                       std::size_t samples, double cap = 1e12) {
  if (!(t_max > 0.0)) throw ParameterError("doublingConstant needs t_max > 0");
  if (samples < 2) throw ParameterError("doublingConstant needs at least 2 samples");
  DoublingResult result;
  result.cap = cap;
  result.t_max = t_max;
  result.samples = samples;
  const double lo = std::log(t_max) - 8.0 * std::log(10.0), hi = std::log(t_max);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = std::exp(lo + (hi - lo) * static_cast<double>(i) / (samples - 1));
    if (psi.logEvaluate(t) < std::log(1e-300)) continue;
    if (psi.logDoublingRatio(t) > std::log(cap)) {
      result.bounded = false;
      result.constant = cap;
      return result;
    }
    best = std::max(best, psi.doublingRatio(t));
  }
  result.constant = best;
  return result;
}

}  // namespace holab
