// Copyright 2026 The cssim Authors
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

namespace cssim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed operator text, config document or CSV.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operands disagree on register size or vector dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A dense representation would exceed the supported register size.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Input that is well-formed but cannot be processed (zero operator, identity
/// stabilizer, too few compatible candidates, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The operator has no noncontextual decomposition.
class ContextualityError : public Error {
 public:
  using Error::Error;
};

/// Readout calibration produced a (near-)singular assignment matrix.
class CalibrationError : public Error {
 public:
  using Error::Error;
};

/// Postselection or estimation had no samples to work with.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Extrapolation could not produce a finite fit.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace cssim
