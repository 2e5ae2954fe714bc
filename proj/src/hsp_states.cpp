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

#include "heis/hsp_states.hpp"

#include <cmath>
#include <string>

#include "heis/errors.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t k) { return static_cast<Index>(k); }

}  // namespace

HiddenSubgroupInstance::HiddenSubgroupInstance(FieldPrime p, SubgroupId subgroup)
    : p_(p), subgroup_(subgroup), elements_(subgroup_elements(p, subgroup)), label_(group_order(p)) {
    for (const auto& coset : left_cosets(p, elements_)) {
        for (const auto& g : coset.elements) label_[g.index()] = coset.representative.index();
    }
}

StateVector coset_state(const GroupElement& representative, const std::vector<GroupElement>& subgroup) {
    const FieldPrime p = representative.prime();
    CVector v = CVector::Zero(ix(group_order(p)));
    const double amp = 1.0 / std::sqrt(static_cast<double>(subgroup.size()));
    for (const auto& h : subgroup) v(ix(multiply(representative, h).index())) = amp;
    return StateVector(std::move(v));
}

StateVector coset_state(const GroupElement& representative, const SubgroupId& s) {
    return coset_state(representative, subgroup_elements(representative.prime(), s));
}

DensityMatrix hidden_subgroup_state(FieldPrime p, const std::vector<GroupElement>& subgroup) {
    const std::size_t n = group_order(p);
    const double weight = static_cast<double>(subgroup.size()) / static_cast<double>(n);
    CMatrix rho = CMatrix::Zero(ix(n), ix(n));
    for (const auto& coset : left_cosets(p, subgroup)) {
        const auto psi = coset_state(coset.representative, subgroup);
        rho += weight * psi.amplitudes() * psi.amplitudes().adjoint();
    }
    return DensityMatrix(std::move(rho));
}

DensityMatrix hidden_subgroup_state(FieldPrime p, const SubgroupId& s) {
    return hidden_subgroup_state(p, subgroup_elements(p, s));
}

DensityMatrix hidden_subgroup_state_regular(FieldPrime p, const std::vector<GroupElement>& subgroup) {
    const std::size_t n = group_order(p);
    CMatrix rho = CMatrix::Zero(ix(n), ix(n));
    for (const auto& h : subgroup) {
        const auto target = regular_permutation(Side::Right, h);
        for (std::size_t k = 0; k < n; ++k) rho(ix(target[k]), ix(k)) += 1.0 / static_cast<double>(n);
    }
    return DensityMatrix(std::move(rho));
}

std::vector<SampledIrrepOutcome> weak_fourier_sample(FieldPrime p, const DensityMatrix& rho) {
    const auto& q = qft_matrix(p);
    if (rho.dimension() != q.dimension()) throw LayoutMismatch("weak_fourier_sample: state is not on the group algebra");
    const CMatrix fourier = q.entries() * rho.entries() * q.entries().adjoint();
    const FourierLayout fl(p);
    std::vector<SampledIrrepOutcome> out;
    for (std::size_t pos = 0; pos < fl.irreps().size(); ++pos) {
        const std::size_t d = fl.dimension(pos);
        const CMatrix block = fourier.block(ix(fl.offset(pos)), ix(fl.offset(pos)), ix(d * d), ix(d * d));
        const double prob = std::max(0.0, block.trace().real());
        SampledIrrepOutcome outcome{fl.irreps()[pos], prob, std::nullopt};
        if (prob > 1e-14) {
            auto collapsed = DensityMatrix::normalized(block, RegisterLayout({d, d}));
            outcome.conditional_state = partial_trace(collapsed, {0});
        } else {
            outcome.probability = 0.0;
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

std::vector<SampledIrrepOutcome> weak_fourier_sample(FieldPrime p, const SubgroupId& s) {
    return weak_fourier_sample(p, hidden_subgroup_state(p, s));
}

std::vector<SampledIrrepOutcome> weak_fourier_sample_block_formula(FieldPrime p,
                                                                   const std::vector<GroupElement>& subgroup) {
    const double order = static_cast<double>(group_order(p));
    std::vector<SampledIrrepOutcome> out;
    for (const auto& mu : all_irreps(p)) {
        const std::size_t d = mu.dimension(p);
        CMatrix sum_d = CMatrix::Zero(ix(d), ix(d));
        Complex sum_chi = 0.0;
        for (const auto& h : subgroup) {
            sum_d += irrep_matrix(mu, h);
            sum_chi += character_closed_form(mu, h);
        }
        SampledIrrepOutcome outcome{mu, std::max(0.0, static_cast<double>(d) / order * sum_chi.real()), std::nullopt};
        if (outcome.probability > 1e-14) {
            outcome.conditional_state = DensityMatrix::normalized(sum_d / sum_chi, RegisterLayout::single(d));
        } else {
            outcome.probability = 0.0;
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

double one_dim_probability_closed_form(FieldPrime p, int i, int a, int b) {
    const double q = p.value();
    return mod(a + static_cast<std::int64_t>(b) * i, p.value()) == 0 ? 1.0 / (q * q) : 0.0;
}

CMatrix rho_k_closed_form(FieldPrime p, int i, int j, int k) {
    const int q = p.value();
    const RootsOfUnity omega(p);
    const std::int64_t half = inv_mod(2, q);
    CMatrix rho = CMatrix::Zero(q, q);
    for (std::int64_t l = 0; l < q; ++l) {
        const std::int64_t outer = mod(half * l % q * (l - 1 + q) % q * i % q * k + l * j % q * k, q);
        for (std::int64_t r = 0; r < q; ++r) {
            rho(mod(r + l, q), ix(static_cast<std::size_t>(r))) += omega(outer + mod(k * l % q * i % q * r, q)) / static_cast<double>(q);
        }
    }
    return rho;
}

Complex hscp_coefficient(const IrrepLabel& mu, const std::vector<GroupElement>& subgroup) {
    if (subgroup.empty()) throw Error("hscp_coefficient: empty subgroup");
    const FieldPrime p = subgroup.front().prime();
    Complex sum = 0.0;
    for (const auto& h : subgroup) sum += std::conj(character(mu, h));
    return sum / (static_cast<double>(group_order(p)) * static_cast<double>(mu.dimension(p)));
}

DensityMatrix hscp_state(FieldPrime p, const SubgroupId& s) {
    const auto h = subgroup_elements(p, s);
    const std::size_t n = group_order(p);
    CMatrix rho = CMatrix::Zero(ix(n), ix(n));
    for (const auto& g : all_elements(p)) rho += hidden_subgroup_state(p, conjugate_set(g, h)).entries();
    return DensityMatrix::normalized(rho / static_cast<double>(n), RegisterLayout::single(n));
}

DensityMatrix hscp_state_from_coefficients(FieldPrime p, const SubgroupId& s) {
    const auto h = subgroup_elements(p, s);
    const FourierLayout fl(p);
    CVector diag(ix(fl.total()));
    for (std::size_t pos = 0; pos < fl.irreps().size(); ++pos) {
        const Complex c = hscp_coefficient(fl.irreps()[pos], h);
        const std::size_t d = fl.dimension(pos);
        diag.segment(ix(fl.offset(pos)), ix(d * d)).setConstant(c);
    }
    const auto& q = qft_matrix(p).entries();
    return DensityMatrix::normalized(q.adjoint() * diag.asDiagonal() * q, RegisterLayout::single(fl.total()));
}

DensityMatrix two_copy_hscp_state(FieldPrime p, const SubgroupId& s, std::size_t max_dimension) {
    const std::size_t n = group_order(p);
    if (n * n > max_dimension) {
        throw DimensionTooLarge("two-copy state has dimension " + std::to_string(n * n) + " > limit " +
                                std::to_string(max_dimension));
    }
    const auto h = subgroup_elements(p, s);
    CMatrix rho = CMatrix::Zero(ix(n * n), ix(n * n));
    for (const auto& g : all_elements(p)) {
        const auto single = hidden_subgroup_state(p, conjugate_set(g, h));
        rho += kron(single.entries(), single.entries());
    }
    return DensityMatrix::normalized(rho / static_cast<double>(n), RegisterLayout({n, n}));
}

double regular_invariance_error(const DensityMatrix& rho, FieldPrime p, Side side, std::size_t copies) {
    const std::size_t n = group_order(p);
    std::size_t total = 1;
    for (std::size_t c = 0; c < copies; ++c) total *= n;
    if (rho.dimension() != total) throw LayoutMismatch("regular_invariance_error: dimension mismatch");
    double worst = 0.0;
    for (const auto& g : all_elements(p)) {
        const auto single = regular_permutation(side, g);
        std::vector<std::size_t> target(total);
        for (std::size_t k = 0; k < total; ++k) {
            std::size_t rest = k, image = 0, scale = 1;
            for (std::size_t c = 0; c < copies; ++c) {
                image += single[rest % n] * scale;
                rest /= n;
                scale *= n;
            }
            target[k] = image;
        }
        worst = std::max(worst, max_abs_diff(conjugate_by_permutation(rho.entries(), target), rho.entries()));
    }
    return worst;
}

}  // namespace heis
