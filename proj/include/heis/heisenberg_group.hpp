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
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "heis/zp_field.hpp"

namespace heis {

/// Element (x, y, z) of the Heisenberg group H_p, i.e. the unitriangular matrix
/// [[1, x, y], [0, 1, z], [0, 0, 1]] over Z_p.
struct GroupElement {
    Residue x, y, z;

    GroupElement(FieldPrime p, std::int64_t x, std::int64_t y, std::int64_t z)
        : x(x, p), y(y, p), z(z, p) {}
    GroupElement(Residue x, Residue y, Residue z);

    static GroupElement identity(FieldPrime p) { return GroupElement(p, 0, 0, 0); }
    /// Inverse of index(); elements are numbered lexicographically by (x, y, z).
    static GroupElement from_index(FieldPrime p, std::size_t index);

    FieldPrime prime() const { return x.prime(); }
    std::size_t index() const;
    bool is_identity() const { return x.is_zero() && y.is_zero() && z.is_zero(); }

    bool operator==(const GroupElement&) const = default;
    std::strong_ordering operator<=>(const GroupElement& o) const;
};

std::ostream& operator<<(std::ostream& os, const GroupElement& g);
std::string to_string(const GroupElement& g);

/// Parses "(x,y,z)"; whitespace is ignored and components are reduced mod p.
GroupElement parse_element(std::string_view text, FieldPrime p);

std::size_t group_order(FieldPrime p);
std::vector<GroupElement> all_elements(FieldPrime p);

GroupElement multiply(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);
/// g h g^{-1}.
GroupElement conjugate(const GroupElement& g, const GroupElement& h);

/// One row of the subgroup catalog of H_p. `i` and `j` are only meaningful for the
/// labelled families.
struct SubgroupId {
    enum class Kind { Full, Trivial, N, NInfinity, A, AInfinity, Center };

    Kind kind = Kind::Trivial;
    int i = 0;
    int j = 0;

    static SubgroupId full() { return {Kind::Full}; }
    static SubgroupId trivial() { return {Kind::Trivial}; }
    static SubgroupId n(int i) { return {Kind::N, i}; }
    static SubgroupId n_infinity() { return {Kind::NInfinity}; }
    static SubgroupId a(int i, int j) { return {Kind::A, i, j}; }
    static SubgroupId a_infinity(int j) { return {Kind::AInfinity, 0, j}; }
    static SubgroupId center() { return {Kind::Center}; }

    bool operator==(const SubgroupId&) const = default;
};

/// CLI syntax: "Full", "T", "C", "N:i", "N:inf", "A:i,j", "A:inf,j".
std::string to_string(const SubgroupId& s);
std::ostream& operator<<(std::ostream& os, const SubgroupId& s);
SubgroupId parse_subgroup(std::string_view text, FieldPrime p);

/// Every subgroup in the catalog for this prime (p^2 + 2p + 4 entries).
std::vector<SubgroupId> subgroup_catalog(FieldPrime p);

std::vector<GroupElement> subgroup_generators(FieldPrime p, const SubgroupId& s);
std::size_t subgroup_order(FieldPrime p, const SubgroupId& s);

/// All elements of the subgroup, sorted lexicographically.
std::vector<GroupElement> subgroup_elements(FieldPrime p, const SubgroupId& s);

/// Closure of a generating set under multiplication, sorted lexicographically.
std::vector<GroupElement> generated_subgroup(FieldPrime p, const std::vector<GroupElement>& gens);

/// {g h g^{-1} : h in elements}, sorted.
std::vector<GroupElement> conjugate_set(const GroupElement& g, const std::vector<GroupElement>& elements);

bool is_member(const GroupElement& g, const SubgroupId& s);

struct Coset {
    GroupElement representative;  // lexicographically least member
    std::vector<GroupElement> elements;
};

/// Left cosets gH ordered by representative.
std::vector<Coset> left_cosets(FieldPrime p, const std::vector<GroupElement>& subgroup);
std::vector<Coset> left_cosets(FieldPrime p, const SubgroupId& s);

}  // namespace heis
