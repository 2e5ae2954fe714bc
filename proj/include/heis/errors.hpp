// Copyright 2026 The heis-hsp Authors
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

namespace heis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class InvalidPrime : public Error {
   public:
    using Error::Error;
};

class ZeroInverse : public Error {
   public:
    ZeroInverse() : Error("inverse of zero residue") {}
};

class PrimeMismatch : public Error {
   public:
    PrimeMismatch(int p, int q)
        : Error("prime mismatch: " + std::to_string(p) + " vs " + std::to_string(q)) {}
};

class InvalidLabel : public Error {
   public:
    using Error::Error;
};

class ParseError : public Error {
   public:
    using Error::Error;
};

class LayoutMismatch : public Error {
   public:
    using Error::Error;
};

class InvalidState : public Error {
   public:
    using Error::Error;
};

class ZeroProbabilityCollapse : public Error {
   public:
    using Error::Error;
};

class DimensionTooLarge : public Error {
   public:
    using Error::Error;
};

class AsymmetricInput : public Error {
   public:
    using Error::Error;
};

class InconsistentSamples : public Error {
   public:
    using Error::Error;
};

class RepetitionBudgetExhausted : public Error {
   public:
    using Error::Error;
};

class ConfigInvalid : public Error {
   public:
    using Error::Error;
};

class IoFailure : public Error {
   public:
    using Error::Error;
};

}  // namespace heis
