// Copyright 2026 The qnnlab developers.
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

namespace qnnlab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Qubit count outside the supported range.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Qubit index outside the state's register.
class BoundsError : public Error {
  public:
    using Error::Error;
};

/// Mismatched tensor/vector dimensions.
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Invalid scalar argument (range, missing seed, ...).
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Vector expected to be unit norm is not.
class NormalizationError : public Error {
  public:
    using Error::Error;
};

/// Calibration data violates a physical constraint (e.g. T2 > 2*T1).
class PhysicalityError : public Error {
  public:
    using Error::Error;
};

/// Malformed file contents; message names the offending field.
class SchemaError : public Error {
  public:
    using Error::Error;
};

/// Accumulated numerical drift beyond the silent-renormalization band.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Two-qubit gate on a pair absent from the coupling map.
class ConnectivityError : public Error {
  public:
    using Error::Error;
};

/// Operation invoked in a mode it does not support.
class UnsupportedError : public Error {
  public:
    using Error::Error;
};

/// Checksum or manifest mismatch.
class IntegrityError : public Error {
  public:
    using Error::Error;
};

} // namespace qnnlab
