// Copyright 2026 The CFII Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace cfii {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied arguments that violate a precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A numerical quantity is degenerate (zero probability, zero information,
/// singular benchmark). The CLI maps this family to exit code 3.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DegenerateProbability : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

/// p_x = 0 while dp_x/dtheta != 0: the model is not regular at theta.
class IrregularModel : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

class NonPositiveFisherInformation : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

class NotPositiveDefinite : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

class DegenerateBenchmark : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

class OptimizationFailure : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

class NoCrossing : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

}  // namespace cfii
