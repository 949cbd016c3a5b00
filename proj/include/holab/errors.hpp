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

#pragma once

#include <stdexcept>
#include <string>

namespace holab {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative t, |z| >= 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid constructor parameter (p <= 0, alpha < 0, malformed spec string).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Point outside a planar domain, or on its boundary.
class PositionError : public Error {
 public:
  using Error::Error;
};

// Point within tolerance of a polygon edge, so containment is ambiguous.
class AmbiguousPositionError : public PositionError {
 public:
  using PositionError::PositionError;
};

// Invalid geometric construction (self-intersecting chain, repeated vertices).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Conformal fitter failed to converge.
class FitError : public Error {
 public:
  using Error::Error;
};

// Iterative numerical method failed (Newton, QP solver).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Discretization too coarse for the domain.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

// Violated precondition of a lemma check.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace holab
