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

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "heis/errors.hpp"

namespace heis {

namespace {

void check_prime(FieldPrime a, FieldPrime b) {
    if (a != b) throw PrimeMismatch(a.value(), b.value());
}

std::string strip_spaces(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c != ' ' && c != '\t') out.push_back(c);
    }
    return out;
}

long long parse_int(std::string_view text, std::string_view context) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ParseError("expected an integer in '" + std::string(context) + "'");
    }
    return value;
}

int parse_label(std::string_view text, FieldPrime p, std::string_view context) {
    long long v = parse_int(text, context);
    if (v < 0 || v >= p.value()) {
        throw ParseError("label out of range [0, p) in '" + std::string(context) + "'");
    }
    return static_cast<int>(v);
}

}  // namespace

GroupElement::GroupElement(Residue x_, Residue y_, Residue z_) : x(x_), y(y_), z(z_) {
    check_prime(x.prime(), y.prime());
    check_prime(x.prime(), z.prime());
}

GroupElement GroupElement::from_index(FieldPrime p, std::size_t index) {
    const std::size_t q = p.value();
    return GroupElement(p, static_cast<std::int64_t>(index / (q * q)), static_cast<std::int64_t>((index / q) % q),
                        static_cast<std::int64_t>(index % q));
}

std::size_t GroupElement::index() const {
    const std::size_t q = prime().value();
    return (static_cast<std::size_t>(x.value()) * q + y.value()) * q + z.value();
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& o) const {
    if (auto c = x.value() <=> o.x.value(); c != 0) return c;
    if (auto c = y.value() <=> o.y.value(); c != 0) return c;
    return z.value() <=> o.z.value();
}

std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
    return os << '(' << g.x << ',' << g.y << ',' << g.z << ')';
}

std::string to_string(const GroupElement& g) {
    std::ostringstream os;
    os << g;
    return os.str();
}

GroupElement parse_element(std::string_view text, FieldPrime p) {
    const std::string s = strip_spaces(text);
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        throw ParseError("group element must look like (x,y,z): '" + std::string(text) + "'");
    }
    std::string_view body(s.data() + 1, s.size() - 2);
    std::vector<long long> parts;
    std::size_t start = 0;
    while (true) {
        auto comma = body.find(',', start);
        parts.push_back(parse_int(body.substr(start, comma - start), text));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 3) throw ParseError("group element needs three components: '" + std::string(text) + "'");
    return GroupElement(p, parts[0], parts[1], parts[2]);
}

std::size_t group_order(FieldPrime p) {
    const std::size_t q = p.value();
    return q * q * q;
}

std::vector<GroupElement> all_elements(FieldPrime p) {
    std::vector<GroupElement> out;
    out.reserve(group_order(p));
    for (std::size_t k = 0; k < group_order(p); ++k) out.push_back(GroupElement::from_index(p, k));
    return out;
}

GroupElement multiply(const GroupElement& g1, const GroupElement& g2) {
    check_prime(g1.prime(), g2.prime());
    return GroupElement(g1.x + g2.x, g1.y + g2.y + g1.x * g2.z, g1.z + g2.z);
}

GroupElement inverse(const GroupElement& g) { return GroupElement(-g.x, -g.y + g.x * g.z, -g.z); }

GroupElement conjugate(const GroupElement& g, const GroupElement& h) { return multiply(multiply(g, h), inverse(g)); }

std::string to_string(const SubgroupId& s) {
    using K = SubgroupId::Kind;
    switch (s.kind) {
        case K::Full:
            return "Full";
        case K::Trivial:
            return "T";
        case K::N:
            return "N:" + std::to_string(s.i);
        case K::NInfinity:
            return "N:inf";
        case K::A:
            return "A:" + std::to_string(s.i) + "," + std::to_string(s.j);
        case K::AInfinity:
            return "A:inf," + std::to_string(s.j);
        case K::Center:
            return "C";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const SubgroupId& s) { return os << to_string(s); }

SubgroupId parse_subgroup(std::string_view text, FieldPrime p) {
    const std::string s = strip_spaces(text);
    if (s == "Full") return SubgroupId::full();
    if (s == "T") return SubgroupId::trivial();
    if (s == "C") return SubgroupId::center();
    if (s.rfind("N:", 0) == 0) {
        std::string_view rest(s.data() + 2, s.size() - 2);
        if (rest == "inf") return SubgroupId::n_infinity();
        return SubgroupId::n(parse_label(rest, p, text));
    }
    if (s.rfind("A:", 0) == 0) {
        std::string_view rest(s.data() + 2, s.size() - 2);
        auto comma = rest.find(',');
        if (comma == std::string_view::npos) throw ParseError("A subgroup needs 'A:i,j': '" + std::string(text) + "'");
        std::string_view first = rest.substr(0, comma);
        int j = parse_label(rest.substr(comma + 1), p, text);
        if (first == "inf") return SubgroupId::a_infinity(j);
        return SubgroupId::a(parse_label(first, p, text), j);
    }
    throw ParseError("unknown subgroup '" + std::string(text) + "'");
}

std::vector<SubgroupId> subgroup_catalog(FieldPrime p) {
    std::vector<SubgroupId> out{SubgroupId::full(), SubgroupId::trivial()};
    for (int i = 0; i < p.value(); ++i) out.push_back(SubgroupId::n(i));
    out.push_back(SubgroupId::n_infinity());
    for (int i = 0; i < p.value(); ++i) {
        for (int j = 0; j < p.value(); ++j) out.push_back(SubgroupId::a(i, j));
    }
    for (int j = 0; j < p.value(); ++j) out.push_back(SubgroupId::a_infinity(j));
    out.push_back(SubgroupId::center());
    return out;
}

std::vector<GroupElement> subgroup_generators(FieldPrime p, const SubgroupId& s) {
    using K = SubgroupId::Kind;
    switch (s.kind) {
        case K::Full:
            return {GroupElement(p, 1, 0, 0), GroupElement(p, 0, 1, 0), GroupElement(p, 0, 0, 1)};
        case K::Trivial:
            return {GroupElement::identity(p)};
        case K::N:
            return {GroupElement(p, 1, 0, s.i), GroupElement(p, 0, 1, 0)};
        case K::NInfinity:
            return {GroupElement(p, 0, 1, 0), GroupElement(p, 0, 0, 1)};
        case K::A:
            return {GroupElement(p, 1, s.j, s.i)};
        case K::AInfinity:
            return {GroupElement(p, 0, s.j, 1)};
        case K::Center:
            return {GroupElement(p, 0, 1, 0)};
    }
    return {};
}

std::size_t subgroup_order(FieldPrime p, const SubgroupId& s) {
    using K = SubgroupId::Kind;
    const std::size_t q = p.value();
    switch (s.kind) {
        case K::Full:
            return q * q * q;
        case K::Trivial:
            return 1;
        case K::N:
        case K::NInfinity:
            return q * q;
        case K::A:
        case K::AInfinity:
        case K::Center:
            return q;
    }
    return 0;
}

std::vector<GroupElement> generated_subgroup(FieldPrime p, const std::vector<GroupElement>& gens) {
    std::set<GroupElement> seen{GroupElement::identity(p)};
    std::vector<GroupElement> frontier{GroupElement::identity(p)};
    while (!frontier.empty()) {
        std::vector<GroupElement> next;
        for (const auto& g : frontier) {
            for (const auto& h : gens) {
                auto gh = multiply(g, h);
                if (seen.insert(gh).second) next.push_back(gh);
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

std::vector<GroupElement> subgroup_elements(FieldPrime p, const SubgroupId& s) {
    return generated_subgroup(p, subgroup_generators(p, s));
}

std::vector<GroupElement> conjugate_set(const GroupElement& g, const std::vector<GroupElement>& elements) {
    std::vector<GroupElement> out;
    out.reserve(elements.size());
    for (const auto& h : elements) out.push_back(conjugate(g, h));
    std::sort(out.begin(), out.end());
    return out;
}

bool is_member(const GroupElement& g, const SubgroupId& s) {
    using K = SubgroupId::Kind;
    const int p = g.prime().value();
    const std::int64_t x = g.x.value(), y = g.y.value(), z = g.z.value();
    switch (s.kind) {
        case K::Full:
            return true;
        case K::Trivial:
            return g.is_identity();
        case K::N:
            return z == mod(x * s.i, p);
        case K::NInfinity:
            return x == 0;
        case K::A: {
            // (1,j,i)^l = (l, 2^{-1} l (l-1) i + l j, l i)
            const std::int64_t half = inv_mod(2, p);
            return z == mod(x * s.i, p) && y == mod(half * x % p * (x - 1 + p) % p * s.i + x * s.j, p);
        }
        case K::AInfinity:
            return x == 0 && y == mod(z * s.j, p);
        case K::Center:
            return x == 0 && z == 0;
    }
    return false;
}

std::vector<Coset> left_cosets(FieldPrime p, const std::vector<GroupElement>& subgroup) {
    std::vector<bool> covered(group_order(p), false);
    std::vector<Coset> out;
    // Iterating in lexicographic order makes the first uncovered element the least member.
    for (const auto& g : all_elements(p)) {
        if (covered[g.index()]) continue;
        Coset c{g, {}};
        c.elements.reserve(subgroup.size());
        for (const auto& h : subgroup) {
            auto gh = multiply(g, h);
            covered[gh.index()] = true;
            c.elements.push_back(gh);
        }
        std::sort(c.elements.begin(), c.elements.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Coset> left_cosets(FieldPrime p, const SubgroupId& s) { return left_cosets(p, subgroup_elements(p, s)); }

}  // namespace heis
