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

#include "heis/pgm_crosscheck.hpp"

#include <algorithm>
#include <cmath>

#include "heis/errors.hpp"
#include "heis/heisenberg_reps.hpp"
#include "heis/hscp_pipeline.hpp"
#include "heis/hsp_states.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

/// 2^{-1} b (b - 1) mod p.
std::int64_t triangle(std::int64_t b, int q) { return mod(static_cast<std::int64_t>(inv_mod(2, q)) * mod(b * (b - 1), q), q); }

StateVector from_exponents(FieldPrime p, const std::vector<std::int64_t>& exponents) {
    const RootsOfUnity omega(p);
    const double norm = 1.0 / std::sqrt(static_cast<double>(exponents.size()));
    CVector v(static_cast<Index>(exponents.size()));
    for (std::size_t k = 0; k < exponents.size(); ++k) v(static_cast<Index>(k)) = norm * omega(exponents[k]);
    return StateVector(std::move(v), RegisterLayout::single(exponents.size()));
}

PgmReduction make_reduction(const MeasurementBranch<StateVector>& branch, FieldPrime p) {
    const auto& full = *branch.state;
    const int q = p.value();
    CVector v(q);
    for (int r = 0; r < q; ++r) v(r) = full[static_cast<std::size_t>(r) * q + branch.outcome];
    return PgmReduction{static_cast<int>(branch.outcome), branch.probability,
                        StateVector::normalized(std::move(v), RegisterLayout::single(static_cast<std::size_t>(q)))};
}

StateVector reduction_input(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2, ZHandling z_handling) {
    if (z_handling == ZHandling::Keep) return tensor(pgm_state(p, i, j, y1, z1), pgm_state(p, i, j, y2, z2));
    return tensor(pgm_y_state(p, i, j, y1), pgm_y_state(p, i, j, y2));
}

}  // namespace

StateVector pgm_state(FieldPrime p, int i, int j, int y, int z) {
    const int q = p.value();
    std::vector<std::int64_t> e(static_cast<std::size_t>(q));
    for (std::int64_t b = 0; b < q; ++b) {
        e[b] = b * j % q * y + triangle(b, q) * i % q * y + b * j % q * z;
    }
    return from_exponents(p, e);
}

StateVector pgm_y_state(FieldPrime p, int i, int j, int y) {
    const int q = p.value();
    std::vector<std::int64_t> e(static_cast<std::size_t>(q));
    for (std::int64_t b = 0; b < q; ++b) e[b] = triangle(b, q) * i % q * y + b * j % q * y;
    return from_exponents(p, e);
}

UnitaryOp pgm_basis_change(FieldPrime p, int y1, int y2) {
    const int q = p.value();
    if (mod(y1 + y2, q) == 0) throw InvalidLabel("pgm_basis_change: y1 + y2 must be nonzero");
    const std::int64_t inv_sum = inv_mod(y1 + y2, q);
    std::vector<std::size_t> target(static_cast<std::size_t>(q) * q);
    for (std::int64_t s = 0; s < q; ++s) {
        for (std::int64_t t = 0; t < q; ++t) {
            const int u = mod(s - t, q);
            const int w = mod(mod(s * y1 + t * y2, q) * inv_sum, q);
            target[static_cast<std::size_t>(s * q + t)] = static_cast<std::size_t>(u) * q + w;
        }
    }
    const auto n = static_cast<std::size_t>(q);
    return UnitaryOp::permutation(RegisterLayout({n, n}), target);
}

std::vector<PgmReduction> pgm_reduce_two_copies(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2,
                                                ZHandling z_handling) {
    const StateVector out = apply(pgm_basis_change(p, y1, y2), reduction_input(p, i, j, y1, z1, y2, z2, z_handling));
    std::vector<PgmReduction> result;
    for (const auto& b : measure_register(out, 1)) {
        if (b.state) result.push_back(make_reduction(b, p));
    }
    return result;
}

PgmReduction pgm_reduce_two_copies(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2, Rng& rng,
                                   ZHandling z_handling) {
    const StateVector out = apply(pgm_basis_change(p, y1, y2), reduction_input(p, i, j, y1, z1, y2, z2, z_handling));
    return make_reduction(measure_register(out, 1, rng), p);
}

StateVector pgm_reduced_closed_form(FieldPrime p, int i, int y1, int y2) { return cg_output_closed_form(p, i, y1, y2); }

double compare_to_cg(FieldPrime p, int i, int k1, int k2, int j, ZHandling z_handling, int z1, int z2) {
    const auto layout = RegisterLayout::single(static_cast<std::size_t>(p.value()));
    const DensityMatrix joint = tensor(DensityMatrix::normalized(rho_k_closed_form(p, i, j, k1), layout),
                                       DensityMatrix::normalized(rho_k_closed_form(p, i, j, k2), layout));
    const auto cg = cg_and_measure_partner(p, k1, k2, joint);
    const auto pgm = pgm_reduce_two_copies(p, i, j, k1, z1, k2, z2, z_handling);
    double worst = 1.0;
    for (const auto& c : cg) {
        if (!c.pure) return 0.0;
        for (const auto& g : pgm) worst = std::min(worst, fidelity_pure(*c.pure, g.state));
    }
    return worst;
}

CVector two_copy_amplitudes_uv(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2) {
    const int q = p.value();
    const RootsOfUnity omega(p);
    CVector v(static_cast<Index>(q) * q);
    for (std::int64_t b1 = 0; b1 < q; ++b1) {
        for (std::int64_t b2 = 0; b2 < q; ++b2) {
            const std::int64_t u = mod(b1 * y1 + b2 * y2, q);
            const std::int64_t w = mod(triangle(b1, q) * y1 + b1 * z1 + triangle(b2, q) * y2 + b2 * z2, q);
            v(b1 * q + b2) = omega(u * j + w * i) / static_cast<double>(q);
        }
    }
    return v;
}

CVector two_copy_amplitudes_uw(FieldPrime p, int i, int j, int y1, int y2) {
    const int q = p.value();
    const RootsOfUnity omega(p);
    CVector v(static_cast<Index>(q) * q);
    for (std::int64_t b1 = 0; b1 < q; ++b1) {
        for (std::int64_t b2 = 0; b2 < q; ++b2) {
            const std::int64_t u = mod(b1 * y1 + b2 * y2, q);
            const std::int64_t w = mod(triangle(b1, q) * y1 + triangle(b2, q) * y2, q);
            v(b1 * q + b2) = omega(u * j + w * i) / static_cast<double>(q);
        }
    }
    return v;
}

}  // namespace heis
