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

#include "heis/zp_field.hpp"

#include <string>

#include "heis/errors.hpp"

namespace heis {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

FieldPrime::FieldPrime(int p) : p_(p) {
    if (!is_prime(p)) throw InvalidPrime(std::to_string(p) + " is not prime");
    if (p == 2) throw InvalidPrime("p = 2 is not supported; an odd prime is required");
}

void Residue::check_same(const Residue& o) const {
    if (prime_ != o.prime_) throw PrimeMismatch(prime_.value(), o.prime_.value());
}

Residue Residue::operator+(const Residue& o) const {
    check_same(o);
    return Residue(static_cast<std::int64_t>(value_) + o.value_, prime_);
}

Residue Residue::operator-(const Residue& o) const {
    check_same(o);
    return Residue(static_cast<std::int64_t>(value_) - o.value_, prime_);
}

Residue Residue::operator*(const Residue& o) const {
    check_same(o);
    return Residue(static_cast<std::int64_t>(value_) * o.value_, prime_);
}

std::ostream& operator<<(std::ostream& os, const Residue& r) { return os << r.value(); }

int inv_mod(std::int64_t x, int p) {
    x = mod(x, p);
    if (x == 0) throw ZeroInverse();
    // Fermat: x^{p-2}.
    std::int64_t result = 1, base = x;
    for (int e = p - 2; e > 0; e >>= 1) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
    }
    return static_cast<int>(result);
}

Residue inv(const Residue& x) { return Residue(inv_mod(x.value(), x.prime().value()), x.prime()); }

QuadraticClass quadratic_residue_class(const Residue& x) {
    if (x.is_zero()) return QuadraticClass::Zero;
    return sqrt_roots(x) ? QuadraticClass::Square : QuadraticClass::NonSquare;
}

std::optional<std::pair<Residue, Residue>> sqrt_roots(const Residue& t) {
    const FieldPrime p = t.prime();
    if (t.is_zero()) return std::pair{Residue(0, p), Residue(0, p)};
    // Exhaustive search over the lower half.
    for (int r = 1; r <= (p.value() - 1) / 2; ++r) {
        if (mod(static_cast<std::int64_t>(r) * r, p.value()) == t.value()) {
            return std::pair{Residue(r, p), Residue(p.value() - r, p)};
        }
    }
    return std::nullopt;
}

}  // namespace heis
