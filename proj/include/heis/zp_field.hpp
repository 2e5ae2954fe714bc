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

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

namespace heis {

/// Reduces any integer into [0, p).
constexpr int mod(std::int64_t value, int p) {
    auto r = static_cast<int>(value % p);
    return r < 0 ? r + p : r;
}

/// An odd prime modulus. Primality is checked by trial division at construction.
class FieldPrime {
   public:
    explicit FieldPrime(int p);

    int value() const { return p_; }
    operator int() const { return p_; }

    bool operator==(const FieldPrime&) const = default;

   private:
    int p_;
};

bool is_prime(int n);

/// An element of Z_p. Arithmetic between residues of different primes throws PrimeMismatch.
class Residue {
   public:
    Residue(std::int64_t value, FieldPrime prime) : value_(mod(value, prime.value())), prime_(prime) {}

    int value() const { return value_; }
    FieldPrime prime() const { return prime_; }
    bool is_zero() const { return value_ == 0; }

    Residue operator+(const Residue& o) const;
    Residue operator-(const Residue& o) const;
    Residue operator*(const Residue& o) const;
    Residue operator-() const { return Residue(-value_, prime_); }
    Residue& operator+=(const Residue& o) { return *this = *this + o; }
    Residue& operator-=(const Residue& o) { return *this = *this - o; }
    Residue& operator*=(const Residue& o) { return *this = *this * o; }

    bool operator==(const Residue& o) const { return value_ == o.value_ && prime_ == o.prime_; }
    std::strong_ordering operator<=>(const Residue& o) const { return value_ <=> o.value_; }

   private:
    void check_same(const Residue& o) const;

    int value_;
    FieldPrime prime_;
};

std::ostream& operator<<(std::ostream& os, const Residue& r);

/// Multiplicative inverse; throws ZeroInverse for x = 0.
Residue inv(const Residue& x);

/// Raw-integer inverse in Z_p, used on hot paths.
int inv_mod(std::int64_t x, int p);

enum class QuadraticClass { Zero, Square, NonSquare };

QuadraticClass quadratic_residue_class(const Residue& x);

/// The two square roots of t, canonical root first. The canonical root is the one in
/// [1, (p-1)/2]; the other is p minus it. Returns (0, 0) for t = 0 and nothing for a
/// non-residue.
std::optional<std::pair<Residue, Residue>> sqrt_roots(const Residue& t);

}  // namespace heis
