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

#include "heis/heisenberg_reps.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

#include "heis/errors.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t k) { return static_cast<Index>(k); }

}  // namespace

std::string to_string(const IrrepLabel& mu) {
    if (mu.is_one_dim()) return "chi(" + std::to_string(mu.a) + "," + std::to_string(mu.b) + ")";
    return "sigma(" + std::to_string(mu.k) + ")";
}

std::ostream& operator<<(std::ostream& os, const IrrepLabel& mu) { return os << to_string(mu); }

void validate(const IrrepLabel& mu, FieldPrime p) {
    auto in_range = [&](int v) { return v >= 0 && v < p.value(); };
    if (mu.is_one_dim()) {
        if (!in_range(mu.a) || !in_range(mu.b)) throw InvalidLabel("one-dimensional label out of range: " + to_string(mu));
    } else if (!in_range(mu.k) || mu.k == 0) {
        throw InvalidLabel("p-dimensional label needs k in [1, p): " + to_string(mu));
    }
}

std::vector<IrrepLabel> all_irreps(FieldPrime p) {
    std::vector<IrrepLabel> out;
    for (int a = 0; a < p.value(); ++a) {
        for (int b = 0; b < p.value(); ++b) out.push_back(IrrepLabel::one_dim(a, b));
    }
    for (int k = 1; k < p.value(); ++k) out.push_back(IrrepLabel::p_dim(k));
    return out;
}

std::size_t irrep_position(FieldPrime p, const IrrepLabel& mu) {
    validate(mu, p);
    const std::size_t q = p.value();
    if (mu.is_one_dim()) return static_cast<std::size_t>(mu.a) * q + mu.b;
    return q * q + mu.k - 1;
}

RootsOfUnity::RootsOfUnity(FieldPrime p) : p_(p.value()), table_(p.value()) {
    for (int k = 0; k < p_; ++k) table_[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / p_);
}

Complex omega_power(FieldPrime p, std::int64_t power) {
    return std::polar(1.0, 2.0 * std::numbers::pi * mod(power, p.value()) / p.value());
}

CMatrix irrep_matrix(const IrrepLabel& mu, const GroupElement& g) {
    const FieldPrime p = g.prime();
    validate(mu, p);
    const std::int64_t x = g.x.value(), y = g.y.value(), z = g.z.value();
    if (mu.is_one_dim()) {
        CMatrix m(1, 1);
        m(0, 0) = omega_power(p, mu.a * x + mu.b * z);
        return m;
    }
    const int q = p.value();
    CMatrix m = CMatrix::Zero(q, q);
    for (int r = 0; r < q; ++r) m(mod(r + x, q), r) = omega_power(p, mu.k * y + mu.k * z * r);
    return m;
}

UnitaryOp irrep_operator(const IrrepLabel& mu, const GroupElement& g) {
    return UnitaryOp(irrep_matrix(mu, g), RegisterLayout::single(mu.dimension(g.prime())));
}

Complex character(const IrrepLabel& mu, const GroupElement& g) { return irrep_matrix(mu, g).trace(); }

Complex character_closed_form(const IrrepLabel& mu, const GroupElement& g) {
    const FieldPrime p = g.prime();
    validate(mu, p);
    if (mu.is_one_dim()) return omega_power(p, static_cast<std::int64_t>(mu.a) * g.x.value() + mu.b * g.z.value());
    if (!g.x.is_zero() || !g.z.is_zero()) return 0.0;
    return static_cast<double>(p.value()) * omega_power(p, static_cast<std::int64_t>(mu.k) * g.y.value());
}

std::vector<std::size_t> regular_permutation(Side side, const GroupElement& g) {
    const FieldPrime p = g.prime();
    const auto g_inv = inverse(g);
    std::vector<std::size_t> target(group_order(p));
    for (std::size_t k = 0; k < target.size(); ++k) {
        const auto h = GroupElement::from_index(p, k);
        target[k] = (side == Side::Left ? multiply(g, h) : multiply(h, g_inv)).index();
    }
    return target;
}

UnitaryOp regular_rep(Side side, const GroupElement& g) {
    const auto target = regular_permutation(side, g);
    return UnitaryOp::permutation(RegisterLayout::single(target.size()), target);
}

FourierLayout::FourierLayout(FieldPrime p) : irreps_(all_irreps(p)) {
    for (const auto& mu : irreps_) {
        offsets_.push_back(total_);
        dims_.push_back(mu.dimension(p));
        total_ += dims_.back() * dims_.back();
    }
}

namespace {

UnitaryOp build_qft(FieldPrime p) {
    const FourierLayout fl(p);
    const std::size_t n = group_order(p);
    CMatrix q = CMatrix::Zero(ix(n), ix(n));
    for (std::size_t pos = 0; pos < fl.irreps().size(); ++pos) {
        const auto& mu = fl.irreps()[pos];
        const std::size_t d = fl.dimension(pos);
        const double scale = std::sqrt(static_cast<double>(d) / static_cast<double>(n));
        for (std::size_t col = 0; col < n; ++col) {
            const auto g = GroupElement::from_index(p, col);
            const CMatrix dg = irrep_matrix(mu, g);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) q(ix(fl.index(pos, i, j)), ix(col)) = scale * dg(ix(i), ix(j));
            }
        }
    }
    return UnitaryOp(std::move(q), RegisterLayout::single(n));
}

}  // namespace

const UnitaryOp& qft_matrix(FieldPrime p) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const UnitaryOp>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[p.value()];
    if (!slot) slot = std::make_unique<const UnitaryOp>(build_qft(p));
    return *slot;
}

CMatrix regular_rep_fourier_blocks(Side side, const GroupElement& g) {
    const FieldPrime p = g.prime();
    const FourierLayout fl(p);
    CMatrix out = CMatrix::Zero(ix(fl.total()), ix(fl.total()));
    for (std::size_t pos = 0; pos < fl.irreps().size(); ++pos) {
        const std::size_t d = fl.dimension(pos);
        const CMatrix id = CMatrix::Identity(ix(d), ix(d));
        const CMatrix block = side == Side::Right ? kron(irrep_matrix(fl.irreps()[pos], inverse(g)), id)
                                                  : kron(id, irrep_matrix(fl.irreps()[pos], g).transpose());
        out.block(ix(fl.offset(pos)), ix(fl.offset(pos)), ix(d * d), ix(d * d)) = block;
    }
    return out;
}

CMatrix character_projector(const IrrepLabel& mu, FieldPrime p) {
    validate(mu, p);
    const std::size_t n = group_order(p);
    const double scale = static_cast<double>(mu.dimension(p)) / static_cast<double>(n);
    CMatrix c = CMatrix::Zero(ix(n), ix(n));
    for (const auto& g : all_elements(p)) {
        const Complex w = scale * std::conj(character(mu, g));
        const auto target = regular_permutation(Side::Right, g);
        for (std::size_t k = 0; k < n; ++k) c(ix(target[k]), ix(k)) += w;
    }
    return c;
}

}  // namespace heis
