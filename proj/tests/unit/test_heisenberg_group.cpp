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


#include "heis/heisenberg_group.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <set>

#include "heis/errors.hpp"

namespace heis {
namespace {

using Mat3 = std::array<std::array<int, 3>, 3>;

Mat3 to_matrix(const GroupElement& g) {
    return {{{1, g.x.value(), g.y.value()}, {0, 1, g.z.value()}, {0, 0, 1}}};
}

GroupElement from_matrix(const Mat3& m, FieldPrime p) { return GroupElement(p, m[0][1], m[0][2], m[1][2]); }

Mat3 matmul(const Mat3& a, const Mat3& b, int p) {
    Mat3 c{};
    for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) {
            int acc = 0;
            for (int t = 0; t < 3; ++t) acc += a[r][t] * b[t][s];
            c[r][s] = mod(acc, p);
        }
    }
    return c;
}

std::set<GroupElement> as_set(const std::vector<GroupElement>& v) { return {v.begin(), v.end()}; }

TEST(Multiply, Examples) {
    const FieldPrime p5(5), p3(3);
    EXPECT_EQ(multiply(GroupElement(p5, 1, 0, 0), GroupElement(p5, 0, 0, 1)), GroupElement(p5, 1, 1, 1));
    EXPECT_EQ(multiply(GroupElement::identity(p5), GroupElement(p5, 2, 3, 4)), GroupElement(p5, 2, 3, 4));
    EXPECT_EQ(multiply(GroupElement(p3, 1, 0, 1), GroupElement(p3, 1, 0, 1)), GroupElement(p3, 2, 1, 2));
}

TEST(Multiply, MatchesUpperTriangularMatrixProduct) {
    for (int q : {3, 5}) {
        const FieldPrime p(q);
        for (const auto& a : all_elements(p)) {
            for (const auto& b : all_elements(p)) {
                EXPECT_EQ(multiply(a, b), from_matrix(matmul(to_matrix(a), to_matrix(b), q), p));
            }
        }
    }
}

TEST(Multiply, MixedPrimesThrow) {
    EXPECT_THROW(multiply(GroupElement(FieldPrime(3), 1, 0, 0), GroupElement(FieldPrime(5), 1, 0, 0)), PrimeMismatch);
}

TEST(Inverse, Examples) {
    EXPECT_EQ(inverse(GroupElement(FieldPrime(5), 1, 2, 3)), GroupElement(FieldPrime(5), 4, 1, 2));
    EXPECT_EQ(inverse(GroupElement::identity(FieldPrime(7))), GroupElement::identity(FieldPrime(7)));
    EXPECT_EQ(inverse(GroupElement(FieldPrime(3), 1, 0, 1)), GroupElement(FieldPrime(3), 2, 1, 2));
}

TEST(GroupAxioms, ExhaustiveAtThree) {
    const FieldPrime p(3);
    const auto all = all_elements(p);
    ASSERT_EQ(all.size(), 27u);
    const auto e = GroupElement::identity(p);
    for (const auto& a : all) {
        EXPECT_EQ(multiply(a, e), a);
        EXPECT_EQ(multiply(e, a), a);
        EXPECT_EQ(multiply(a, inverse(a)), e);
        EXPECT_EQ(multiply(inverse(a), a), e);
        int inverses = 0;
        for (const auto& b : all) inverses += multiply(a, b) == e ? 1 : 0;
        EXPECT_EQ(inverses, 1);
        for (const auto& b : all) {
            for (const auto& c : all) EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
        }
    }
    int identities = 0;
    for (const auto& u : all) {
        bool works = true;
        for (const auto& a : all) works = works && multiply(u, a) == a && multiply(a, u) == a;
        identities += works ? 1 : 0;
    }
    EXPECT_EQ(identities, 1);
}

TEST(Conjugate, Examples) {
    const FieldPrime p5(5), p3(3);
    EXPECT_EQ(conjugate(GroupElement(p5, 2, 0, 1), GroupElement(p5, 1, 3, 4)), GroupElement(p5, 1, 0, 4));
    EXPECT_EQ(conjugate(GroupElement::identity(p5), GroupElement(p5, 3, 1, 2)), GroupElement(p5, 3, 1, 2));
    EXPECT_EQ(conjugate(GroupElement(p3, 0, 0, 1), GroupElement(p3, 1, 0, 1)), GroupElement(p3, 1, 2, 1));
}

TEST(Conjugate, GeneratorClosedForm) {
    const FieldPrime p(5);
    for (const auto& g : all_elements(p)) {
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const int x = g.x.value(), z = g.z.value();
                EXPECT_EQ(conjugate(g, GroupElement(p, 1, j, i)), GroupElement(p, 1, j + x * i - z, i));
            }
        }
    }
}

TEST(Indexing, RoundTripAndLexicographicOrder) {
    const FieldPrime p(5);
    const auto all = all_elements(p);
    for (std::size_t k = 0; k < all.size(); ++k) {
        EXPECT_EQ(all[k].index(), k);
        EXPECT_EQ(GroupElement::from_index(p, k), all[k]);
        if (k > 0) {
            EXPECT_LT(all[k - 1], all[k]);
        }
    }
}

TEST(ParseElement, AcceptsTriples) {
    EXPECT_EQ(parse_element("(1,2,3)", FieldPrime(5)), GroupElement(FieldPrime(5), 1, 2, 3));
    EXPECT_EQ(parse_element(" ( 4 , 0 , 1 ) ", FieldPrime(5)), GroupElement(FieldPrime(5), 4, 0, 1));
    EXPECT_THROW(parse_element("(1,2)", FieldPrime(5)), ParseError);
    EXPECT_THROW(parse_element("1,2,3", FieldPrime(5)), ParseError);
    EXPECT_THROW(parse_element("(a,2,3)", FieldPrime(5)), ParseError);
}

TEST(ParseSubgroup, AllTags) {
    const FieldPrime p(5);
    EXPECT_EQ(parse_subgroup("Full", p), SubgroupId::full());
    EXPECT_EQ(parse_subgroup("T", p), SubgroupId::trivial());
    EXPECT_EQ(parse_subgroup("C", p), SubgroupId::center());
    EXPECT_EQ(parse_subgroup("N:3", p), SubgroupId::n(3));
    EXPECT_EQ(parse_subgroup("N:inf", p), SubgroupId::n_infinity());
    EXPECT_EQ(parse_subgroup("A:2,3", p), SubgroupId::a(2, 3));
    EXPECT_EQ(parse_subgroup("A:inf,4", p), SubgroupId::a_infinity(4));
    EXPECT_THROW(parse_subgroup("A:5,0", p), ParseError);
    EXPECT_THROW(parse_subgroup("A:2", p), ParseError);
    EXPECT_THROW(parse_subgroup("Q", p), ParseError);
}

TEST(ParseSubgroup, RoundTripsCatalog) {
    const FieldPrime p(5);
    for (const auto& s : subgroup_catalog(p)) EXPECT_EQ(parse_subgroup(to_string(s), p), s) << to_string(s);
}

TEST(SubgroupElements, Examples) {
    const FieldPrime p(3);
    EXPECT_EQ(as_set(subgroup_elements(p, SubgroupId::a(1, 0))),
              (std::set<GroupElement>{GroupElement(p, 0, 0, 0), GroupElement(p, 1, 0, 1), GroupElement(p, 2, 1, 2)}));
    EXPECT_EQ(subgroup_elements(FieldPrime(7), SubgroupId::trivial()),
              std::vector<GroupElement>{GroupElement::identity(FieldPrime(7))});
    EXPECT_EQ(as_set(subgroup_elements(p, SubgroupId::center())),
              (std::set<GroupElement>{GroupElement(p, 0, 0, 0), GroupElement(p, 0, 1, 0), GroupElement(p, 0, 2, 0)}));
}

TEST(SubgroupElements, OrdersClosureAndGenerators) {
    for (int q : {3, 5}) {
        const FieldPrime p(q);
        const std::size_t p1 = q, p2 = p1 * p1, p3 = p2 * p1;
        for (const auto& s : subgroup_catalog(p)) {
            const auto elems = subgroup_elements(p, s);
            std::size_t expected = 0;
            switch (s.kind) {
                case SubgroupId::Kind::Full: expected = p3; break;
                case SubgroupId::Kind::Trivial: expected = 1; break;
                case SubgroupId::Kind::N:
                case SubgroupId::Kind::NInfinity: expected = p2; break;
                default: expected = p1; break;
            }
            EXPECT_EQ(elems.size(), expected) << to_string(s);
            EXPECT_EQ(subgroup_order(p, s), expected);
            EXPECT_EQ(as_set(elems).size(), elems.size());
            const auto set = as_set(elems);
            for (const auto& a : elems) {
                EXPECT_TRUE(set.count(inverse(a)));
                for (const auto& b : elems) EXPECT_TRUE(set.count(multiply(a, b)));
            }
            EXPECT_EQ(as_set(generated_subgroup(p, subgroup_generators(p, s))), set) << to_string(s);
        }
    }
}

TEST(SubgroupElements, AClosedForm) {
    const FieldPrime p(7);
    const int half = inv_mod(2, 7);
    for (int i = 0; i < 7; ++i) {
        for (int j = 0; j < 7; ++j) {
            std::set<GroupElement> expected;
            for (int l = 0; l < 7; ++l) expected.insert(GroupElement(p, l, half * l * (l - 1) * i + l * j, l * i));
            EXPECT_EQ(as_set(subgroup_elements(p, SubgroupId::a(i, j))), expected);
        }
    }
}

TEST(Subgroups, AConjugatesWithinFixedI) {
    for (int q : {3, 5}) {
        const FieldPrime p(q);
        for (int i = 0; i < q; ++i) {
            for (int j = 0; j < q; ++j) {
                const auto source = subgroup_elements(p, SubgroupId::a(i, j));
                for (int k = 0; k < q; ++k) {
                    const auto target = as_set(subgroup_elements(p, SubgroupId::a(i, k)));
                    bool found = false;
                    for (const auto& g : all_elements(p)) {
                        if (as_set(conjugate_set(g, source)) == target) {
                            found = true;
                            break;
                        }
                    }
                    EXPECT_TRUE(found) << "A(" << i << "," << j << ") -> A(" << i << "," << k << ")";
                }
            }
        }
    }
}

TEST(Subgroups, NIsNormalAndContainsA) {
    for (int q : {3, 5}) {
        const FieldPrime p(q);
        for (int i = 0; i < q; ++i) {
            const auto n = subgroup_elements(p, SubgroupId::n(i));
            const auto n_set = as_set(n);
            for (const auto& g : all_elements(p)) EXPECT_EQ(as_set(conjugate_set(g, n)), n_set);
            for (int j = 0; j < q; ++j) {
                for (const auto& a : subgroup_elements(p, SubgroupId::a(i, j))) EXPECT_TRUE(n_set.count(a));
            }
        }
    }
}

TEST(LeftCosets, Examples) {
    const FieldPrime p(3);
    const auto full = left_cosets(p, SubgroupId::full());
    ASSERT_EQ(full.size(), 1u);
    EXPECT_EQ(full[0].elements.size(), 27u);
    const auto trivial = left_cosets(p, SubgroupId::trivial());
    EXPECT_EQ(trivial.size(), 27u);
    for (const auto& c : trivial) EXPECT_EQ(c.elements.size(), 1u);
    const auto a = left_cosets(p, SubgroupId::a(1, 0));
    EXPECT_EQ(a.size(), 9u);
    for (const auto& c : a) EXPECT_EQ(c.elements.size(), 3u);
}

TEST(LeftCosets, PartitionWithLeastRepresentative) {
    for (int q : {3, 5}) {
        const FieldPrime p(q);
        for (const auto& s : subgroup_catalog(p)) {
            const auto h = subgroup_elements(p, s);
            const auto cosets = left_cosets(p, h);
            EXPECT_EQ(cosets.size() * h.size(), group_order(p));
            std::set<GroupElement> seen;
            for (const auto& c : cosets) {
                EXPECT_EQ(*std::min_element(c.elements.begin(), c.elements.end()), c.representative);
                std::set<GroupElement> expected;
                for (const auto& x : h) expected.insert(multiply(c.representative, x));
                EXPECT_EQ(as_set(c.elements), expected);
                for (const auto& g : c.elements) EXPECT_TRUE(seen.insert(g).second);
            }
            EXPECT_EQ(seen.size(), group_order(p));
        }
    }
}

TEST(IsMember, Examples) {
    const FieldPrime p(3);
    EXPECT_TRUE(is_member(GroupElement(p, 1, 0, 1), SubgroupId::a(1, 0)));
    for (const auto& s : subgroup_catalog(p)) EXPECT_TRUE(is_member(GroupElement::identity(p), s));
    EXPECT_FALSE(is_member(GroupElement(p, 1, 0, 0), SubgroupId::center()));
}

TEST(IsMember, AgreesWithElementLists) {
    const FieldPrime p(3);
    for (const auto& s : subgroup_catalog(p)) {
        const auto set = as_set(subgroup_elements(p, s));
        for (const auto& g : all_elements(p)) EXPECT_EQ(is_member(g, s), set.count(g) == 1);
    }
}

}  // namespace
}  // namespace heis
