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

#include "heis/clebsch_gordan.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "heis/errors.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t k) { return static_cast<Index>(k); }

CgDecomposition monomial_decomposition(const IrrepLabel& mu1, const IrrepLabel& mu2, RegisterLayout in,
                                       RegisterLayout out, std::vector<std::size_t> target,
                                       std::vector<Complex> phase, std::vector<CgSegment> segments) {
    const std::size_t n = target.size();
    CMatrix u = CMatrix::Zero(ix(n), ix(n));
    for (std::size_t k = 0; k < n; ++k) u(ix(target[k]), ix(k)) = phase[k];
    return CgDecomposition{mu1,       mu2, UnitaryOp(std::move(u), std::move(in), std::move(out)), std::move(segments),
                           std::move(target), std::move(phase)};
}

CgDecomposition build(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2) {
    const int q = p.value();
    const std::size_t d1 = mu1.dimension(p), d2 = mu2.dimension(p);
    const RegisterLayout in({d1, d2});

    if (mu1.is_one_dim() && mu2.is_one_dim()) {
        return monomial_decomposition(mu1, mu2, in, RegisterLayout({1, 1}), {0}, {Complex(1.0)},
                                      {CgSegment{IrrepLabel::one_dim(mod(mu1.a + mu2.a, q), mod(mu1.b + mu2.b, q)), 0, 1, 1}});
    }

    if (mu1.is_one_dim() != mu2.is_one_dim()) {
        const IrrepLabel& one = mu1.is_one_dim() ? mu1 : mu2;
        const int k = mu1.is_one_dim() ? mu2.k : mu1.k;
        const std::int64_t shift = static_cast<std::int64_t>(one.b) * inv_mod(k, q);
        std::vector<std::size_t> target(q);
        std::vector<Complex> phase(q);
        for (int s = 0; s < q; ++s) {
            target[s] = static_cast<std::size_t>(mod(s + shift, q));
            phase[s] = omega_power(p, -static_cast<std::int64_t>(one.a) * s);
        }
        return monomial_decomposition(mu1, mu2, in, RegisterLayout({1, static_cast<std::size_t>(q)}), std::move(target),
                                      std::move(phase), {CgSegment{IrrepLabel::p_dim(k), 0, 1, static_cast<std::size_t>(q)}});
    }

    const int k1 = mu1.k, k2 = mu2.k;
    const std::size_t n = static_cast<std::size_t>(q) * q;
    const RegisterLayout out({static_cast<std::size_t>(q), static_cast<std::size_t>(q)});

    if (mod(k1 + k2, q) != 0) {
        const std::int64_t ksum_inv = inv_mod(k1 + k2, q);
        std::vector<std::size_t> target(n);
        for (std::int64_t a = 0; a < q; ++a) {
            for (std::int64_t b = 0; b < q; ++b) {
                const int u = mod(a - b, q);
                const int v = mod((k1 * a + k2 * b) % q * ksum_inv, q);
                target[static_cast<std::size_t>(a * q + b)] = static_cast<std::size_t>(u) * q + v;
            }
        }
        return monomial_decomposition(mu1, mu2, in, out, std::move(target), std::vector<Complex>(n, 1.0),
                                      {CgSegment{IrrepLabel::p_dim(mod(k1 + k2, q)), 0, static_cast<std::size_t>(q),
                                                 static_cast<std::size_t>(q)}});
    }

    const RootsOfUnity omega(p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(q));
    CMatrix x = CMatrix::Zero(ix(n), ix(n));
    for (std::int64_t a = 0; a < q; ++a) {
        for (std::int64_t b = 0; b < q; ++b) {
            for (std::int64_t c = 0; c < q; ++c) x(mod(a - b, q) * q + c, a * q + b) = norm * omega((a + b) * c);
        }
    }
    std::vector<CgSegment> segments;
    for (int u = 0; u < q; ++u) {
        for (int c = 0; c < q; ++c) {
            segments.push_back(CgSegment{IrrepLabel::one_dim(mod(2 * c, q), mod(static_cast<std::int64_t>(k1) * u, q)),
                                         static_cast<std::size_t>(u) * q + c, 1, 1});
        }
    }
    return CgDecomposition{mu1, mu2, UnitaryOp(std::move(x), in, out), std::move(segments), std::nullopt, {}};
}

}  // namespace

std::vector<BranchingEntry> branch(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2) {
    validate(mu1, p);
    validate(mu2, p);
    const int q = p.value();
    if (mu1.is_one_dim() && mu2.is_one_dim()) {
        return {{IrrepLabel::one_dim(mod(mu1.a + mu2.a, q), mod(mu1.b + mu2.b, q)), 1}};
    }
    if (mu1.is_one_dim() != mu2.is_one_dim()) return {{IrrepLabel::p_dim(mu1.is_one_dim() ? mu2.k : mu1.k), 1}};
    if (mod(mu1.k + mu2.k, q) != 0) return {{IrrepLabel::p_dim(mod(mu1.k + mu2.k, q)), static_cast<std::size_t>(q)}};
    std::vector<BranchingEntry> out;
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) out.push_back({IrrepLabel::one_dim(a, b), 1});
    }
    return out;
}

CMatrix CgDecomposition::block_form(const GroupElement& g) const {
    const auto n = ix(unitary.dimension());
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& seg : segments) {
        const CMatrix d = irrep_matrix(seg.irrep, g);
        const auto size = ix(seg.multiplicity * seg.dimension);
        out.block(ix(seg.offset), ix(seg.offset), size, size) =
            kron(CMatrix::Identity(ix(seg.multiplicity), ix(seg.multiplicity)), d);
    }
    return out;
}

const CgDecomposition& cg_unitary(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2) {
    validate(mu1, p);
    validate(mu2, p);
    static std::mutex mutex;
    static std::map<std::tuple<int, std::size_t, std::size_t>, std::unique_ptr<const CgDecomposition>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{p.value(), irrep_position(p, mu1), irrep_position(p, mu2)}];
    if (!slot) slot = std::make_unique<const CgDecomposition>(build(p, mu1, mu2));
    return *slot;
}

CgResult<StateVector> apply_cg(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2, const StateVector& psi) {
    const auto& cg = cg_unitary(p, mu1, mu2);
    if (psi.layout() != cg.unitary.input_layout()) throw LayoutMismatch("apply_cg: state layout does not match irreps");
    if (!cg.monomial_target) return {apply(cg.unitary, psi), &cg.segments};
    const auto& target = *cg.monomial_target;
    CVector out = CVector::Zero(psi.amplitudes().size());
    for (std::size_t k = 0; k < target.size(); ++k) out(ix(target[k])) = cg.monomial_phase[k] * psi[k];
    return {StateVector(std::move(out), cg.unitary.output_layout()), &cg.segments};
}

CgResult<DensityMatrix> apply_cg(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2,
                                 const DensityMatrix& rho) {
    const auto& cg = cg_unitary(p, mu1, mu2);
    if (rho.layout() != cg.unitary.input_layout()) throw LayoutMismatch("apply_cg: state layout does not match irreps");
    if (!cg.monomial_target) return {apply(cg.unitary, rho), &cg.segments};
    const auto& target = *cg.monomial_target;
    const auto& phase = cg.monomial_phase;
    const auto& m = rho.entries();
    CMatrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < target.size(); ++c) {
        const Complex pc = std::conj(phase[c]);
        for (std::size_t r = 0; r < target.size(); ++r) out(ix(target[r]), ix(target[c])) = phase[r] * m(ix(r), ix(c)) * pc;
    }
    return {DensityMatrix(std::move(out), cg.unitary.output_layout()), &cg.segments};
}

}  // namespace heis
