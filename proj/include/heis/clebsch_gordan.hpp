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

#include "heis/heisenberg_reps.hpp"
#include "heis/quantum_linalg.hpp"

namespace heis {

struct BranchingEntry {
    IrrepLabel output;
    std::size_t multiplicity = 1;
};

/// Decomposition of D_mu1 (x) D_mu2 into irreps:
///   chi_{a1,b1} (x) chi_{a2,b2} = chi_{a1+a2, b1+b2}
///   chi_{a,b} (x) sigma_k       = sigma_k
///   sigma_k1 (x) sigma_k2       = p copies of sigma_{k1+k2}     (k1 + k2 != 0)
///   sigma_k (x) sigma_{-k}      = every chi_{a,b} once
std::vector<BranchingEntry> branch(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2);

/// A block of the output basis: coordinates offset + w * dimension + v for multiplicity
/// index w and irrep coordinate v.
struct CgSegment {
    IrrepLabel irrep;
    std::size_t offset = 0;
    std::size_t multiplicity = 1;
    std::size_t dimension = 1;

    std::size_t index(std::size_t w, std::size_t v) const { return offset + w * dimension + v; }
};

/// The basis change U with U (D_mu1(g) (x) D_mu2(g)) U^dagger = (+)_segments I_n (x) D_mu(g).
///
///   one (x) one : U = [1]
///   one (x) p   : V|s> = omega^{-a s} |s + b k^{-1}>
///   k1 + k2 != 0: W|a, b> = |a - b> (x) |(k1 a + k2 b)(k1 + k2)^{-1}>  (multiplicity register first)
///   k1 + k2 == 0: X|a, b> = p^{-1/2} sum_c omega^{(a+b) c} |a - b> (x) |c>, where the output
///                 coordinate (u, c) carries chi_{2c, k1 u}.
///
/// Every case except the last is monomial (one nonzero per column); `monomial_target` and
/// `monomial_phase` describe it so states can be transformed without dense products.
struct CgDecomposition {
    IrrepLabel input1, input2;
    UnitaryOp unitary;
    std::vector<CgSegment> segments;
    std::optional<std::vector<std::size_t>> monomial_target;
    std::vector<Complex> monomial_phase;

    /// (+)_segments I_n (x) D_mu(g) in output coordinates.
    CMatrix block_form(const GroupElement& g) const;
};

/// Memoized per (p, mu1, mu2); the reference stays valid for the life of the program.
const CgDecomposition& cg_unitary(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2);

template <typename State>
struct CgResult {
    State state;
    const std::vector<CgSegment>* segments;
};

/// Applies the transform to a state on the d_mu1 * d_mu2 space (layout {d1, d2}).
CgResult<StateVector> apply_cg(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2, const StateVector& psi);
CgResult<DensityMatrix> apply_cg(FieldPrime p, const IrrepLabel& mu1, const IrrepLabel& mu2,
                                 const DensityMatrix& rho);

}  // namespace heis
