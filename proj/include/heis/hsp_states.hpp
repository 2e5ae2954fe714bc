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

#include <cstddef>
#include <optional>
#include <vector>

#include "heis/heisenberg_group.hpp"
#include "heis/heisenberg_reps.hpp"
#include "heis/quantum_linalg.hpp"

namespace heis {

/// A hiding function realized as its coset partition: f(g) is the index of the
/// lexicographically least element of g H.
class HiddenSubgroupInstance {
   public:
    HiddenSubgroupInstance(FieldPrime p, SubgroupId subgroup);

    FieldPrime prime() const { return p_; }
    const SubgroupId& subgroup() const { return subgroup_; }
    const std::vector<GroupElement>& elements() const { return elements_; }

    /// One oracle query.
    std::size_t query(const GroupElement& g) const { return label_.at(g.index()); }

   private:
    FieldPrime p_;
    SubgroupId subgroup_;
    std::vector<GroupElement> elements_;
    std::vector<std::size_t> label_;
};

/// |gH> = |H|^{-1/2} sum_h |g h> over the group-element basis.
StateVector coset_state(const GroupElement& representative, const std::vector<GroupElement>& subgroup);
StateVector coset_state(const GroupElement& representative, const SubgroupId& s);

/// Uniform mixture of left coset states (the state left after discarding the oracle
/// register).
DensityMatrix hidden_subgroup_state(FieldPrime p, const SubgroupId& s);
DensityMatrix hidden_subgroup_state(FieldPrime p, const std::vector<GroupElement>& subgroup);

/// The same state assembled as (1/|G|) sum_{h in H} R_R(h).
DensityMatrix hidden_subgroup_state_regular(FieldPrime p, const std::vector<GroupElement>& subgroup);

struct SampledIrrepOutcome {
    IrrepLabel label;
    double probability = 0.0;
    /// State on the row (right-action) factor after discarding the column factor; empty
    /// when the label has zero probability.
    std::optional<DensityMatrix> conditional_state;
};

/// Weak Fourier sampling by simulation: Q rho_H Q^dagger, exact measurement of the irrep
/// label, partial trace over the left-action factor. One entry per irrep, in
/// all_irreps order.
std::vector<SampledIrrepOutcome> weak_fourier_sample(FieldPrime p, const SubgroupId& s);
std::vector<SampledIrrepOutcome> weak_fourier_sample(FieldPrime p, const DensityMatrix& rho);

/// Weak Fourier sampling from the block formula: p_mu = (d_mu/|G|) sum_h chi_mu(h),
/// rho_mu = sum_h D_mu(h) / sum_h chi_mu(h). Needs no p^3-dimensional matrices.
std::vector<SampledIrrepOutcome> weak_fourier_sample_block_formula(FieldPrime p,
                                                                   const std::vector<GroupElement>& subgroup);

/// p^{-3} sum_l omega^{a l + b l i} = p^{-2} [a + b i = 0]: label probability of chi_{a,b}
/// when A_{i,j} is hidden.
double one_dim_probability_closed_form(FieldPrime p, int i, int a, int b);

/// rho_k(A_{i,j}) = (1/p) sum_l omega^{2^{-1} l (l-1) i k + l j k} sum_r omega^{k l i r} |r+l><r|.
CMatrix rho_k_closed_form(FieldPrime p, int i, int j, int k);

/// c_mu(H) = (1/(|G| d_mu)) sum_h conj(chi_mu(h)).
Complex hscp_coefficient(const IrrepLabel& mu, const std::vector<GroupElement>& subgroup);

/// (1/|G|) sum_g rho_{g H g^{-1}}.
DensityMatrix hscp_state(FieldPrime p, const SubgroupId& s);
/// Q^dagger [(+)_mu c_mu(H) I (x) I] Q.
DensityMatrix hscp_state_from_coefficients(FieldPrime p, const SubgroupId& s);

/// (1/|G|) sum_g rho_{g H g^{-1}} (x) rho_{g H g^{-1}}. Dimension p^6; throws
/// DimensionTooLarge when p^6 exceeds max_dimension.
DensityMatrix two_copy_hscp_state(FieldPrime p, const SubgroupId& s, std::size_t max_dimension = 729);

/// max |R rho R^dagger - rho| over all g, where R = R_side(g)^{(x) copies}.
double regular_invariance_error(const DensityMatrix& rho, FieldPrime p, Side side, std::size_t copies = 1);

}  // namespace heis
