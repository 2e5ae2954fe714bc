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

#include <gtest/gtest.h>

#include <set>

#include "heis/errors.hpp"

namespace heis {
namespace {

TEST(FieldPrime, AcceptsOddPrimes) {
    for (int p : {3, 5, 7, 11, 13, 31}) EXPECT_EQ(FieldPrime(p).value(), p);
}

TEST(FieldPrime, RejectsTwoCompositesAndSmallValues) {
    for (int p : {-3, 0, 1, 2, 4, 9, 15, 25}) EXPECT_THROW(FieldPrime{p}, InvalidPrime) << p;
}

TEST(Residue, ReducesIntoRange) {
    const FieldPrime p(5);
    EXPECT_EQ(Residue(-1, p).value(), 4);
    EXPECT_EQ(Residue(12, p).value(), 2);
    EXPECT_EQ((Residue(3, p) + Residue(4, p)).value(), 2);
    EXPECT_EQ((Residue(1, p) - Residue(3, p)).value(), 3);
    EXPECT_EQ((Residue(3, p) * Residue(4, p)).value(), 2);
    EXPECT_EQ((-Residue(2, p)).value(), 3);
}

TEST(Residue, MixedPrimesThrow) {
    EXPECT_THROW(Residue(1, FieldPrime(3)) + Residue(1, FieldPrime(5)), PrimeMismatch);
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inv(Residue(2, FieldPrime(5))).value(), 3);
    EXPECT_EQ(inv(Residue(1, FieldPrime(7))).value(), 1);
    EXPECT_EQ(inv(Residue(2, FieldPrime(3))).value(), 2);
}

TEST(Inverse, ZeroThrows) {
    EXPECT_THROW(inv(Residue(0, FieldPrime(5))), ZeroInverse);
    EXPECT_THROW(inv_mod(10, 5), ZeroInverse);
}

TEST(Inverse, PropertyInvolutionAndProduct) {
    for (int q : {3, 5, 7, 11, 13, 31}) {
        const FieldPrime p(q);
        for (int x = 1; x < q; ++x) {
            const Residue r(x, p);
            EXPECT_EQ((r * inv(r)).value(), 1);
            EXPECT_EQ(inv(inv(r)), r);
            EXPECT_EQ(inv_mod(x, q), inv(r).value());
            EXPECT_EQ(inv_mod(x - q, q), inv(r).value());
        }
    }
}

TEST(QuadraticClass, Examples) {
    const FieldPrime p(5);
    EXPECT_EQ(quadratic_residue_class(Residue(4, p)), QuadraticClass::Square);
    EXPECT_EQ(quadratic_residue_class(Residue(2, p)), QuadraticClass::NonSquare);
    EXPECT_EQ(quadratic_residue_class(Residue(0, p)), QuadraticClass::Zero);
}

TEST(QuadraticClass, PropertyCountsAndSquares) {
    for (int q : {3, 5, 7, 11, 13, 31}) {
        const FieldPrime p(q);
        int squares = 0;
        for (int x = 0; x < q; ++x) {
            if (quadratic_residue_class(Residue(x, p)) == QuadraticClass::Square) ++squares;
            EXPECT_NE(quadratic_residue_class(Residue(static_cast<std::int64_t>(x) * x, p)), QuadraticClass::NonSquare);
        }
        EXPECT_EQ(squares, (q - 1) / 2);
    }
}

TEST(SqrtRoots, Examples) {
    const auto r = sqrt_roots(Residue(2, FieldPrime(7)));
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(r->first.value(), 3);
    EXPECT_EQ(r->second.value(), 4);

    const auto zero = sqrt_roots(Residue(0, FieldPrime(5)));
    ASSERT_TRUE(zero.has_value());
    EXPECT_EQ(zero->first.value(), 0);
    EXPECT_EQ(zero->second.value(), 0);

    EXPECT_FALSE(sqrt_roots(Residue(3, FieldPrime(5))).has_value());
}

TEST(SqrtRoots, PropertyCanonicalRootsAndCount) {
    for (int q : {3, 5, 7, 11, 13, 31}) {
        const FieldPrime p(q);
        int with_roots = 0;
        for (int t = 0; t < q; ++t) {
            const Residue rt(t, p);
            const auto roots = sqrt_roots(rt);
            EXPECT_EQ(roots.has_value(), quadratic_residue_class(rt) != QuadraticClass::NonSquare);
            if (!roots) continue;
            ++with_roots;
            EXPECT_EQ(roots->first * roots->first, rt);
            EXPECT_EQ(roots->second * roots->second, rt);
            EXPECT_TRUE((roots->first + roots->second).is_zero());
            if (t != 0) {
                EXPECT_GE(roots->first.value(), 1);
                EXPECT_LE(roots->first.value(), (q - 1) / 2);
            }
        }
        EXPECT_EQ(with_roots, (q + 1) / 2);
    }
}

TEST(Mod, NegativeValues) {
    EXPECT_EQ(mod(-7, 5), 3);
    EXPECT_EQ(mod(-5, 5), 0);
    EXPECT_EQ(mod(7, 5), 2);
}

}  // namespace
}  // namespace heis
