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

#include <vector>

#include "heis/quantum_linalg.hpp"
#include "heis/random.hpp"
#include "heis/zp_field.hpp"

namespace heis {

/// |i,j,y,z> = p^{-1/2} sum_b omega^{b j y + 2^{-1} b (b-1) i y + b j z} |b>.
StateVector pgm_state(FieldPrime p, int i, int j, int y, int z);

/// |i,j,y> = p^{-1/2} sum_b omega^{2^{-1} b (b-1) i y + b j y} |b>.
StateVector pgm_y_state(FieldPrime p, int i, int j, int y);

/// |s, t> -> |s - t, (s y1 + t y2)(y1 + y2)^{-1}>; needs y1 + y2 != 0.
UnitaryOp pgm_basis_change(FieldPrime p, int y1, int y2);

/// Whether the reduction starts from the y-only states or keeps the z phases.
enum class ZHandling { Discard, Keep };

struct PgmReduction {
    int m = 0;
    double probability = 0.0;
    StateVector state;
};

/// Two copies, the basis change, and a measurement of the second register; one entry per
/// outcome m with the first register's state.
std::vector<PgmReduction> pgm_reduce_two_copies(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2,
                                                ZHandling z_handling = ZHandling::Discard);
PgmReduction pgm_reduce_two_copies(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2, Rng& rng,
                                   ZHandling z_handling = ZHandling::Discard);

/// p^{-1/2} sum_r omega^{y1 y2 (2 (y1 + y2))^{-1} i r^2} |r>.
StateVector pgm_reduced_closed_form(FieldPrime p, int i, int y1, int y2);

/// Minimum over m of the fidelity between the reduced PGM state (y1 = k1, y2 = k2) and
/// the multiplicity register left by the Clebsch-Gordan pipeline on A(i, j).
double compare_to_cg(FieldPrime p, int i, int k1, int k2, int j = 0, ZHandling z_handling = ZHandling::Discard,
                     int z1 = 0, int z2 = 0);

/// Two-copy amplitudes p^{-1} omega^{u j + v i} with u = b1 y1 + b2 y2 and
/// v = 2^{-1} b1 (b1-1) y1 + 2^{-1} b2 (b2-1) y2 + b1 z1 + b2 z2.
CVector two_copy_amplitudes_uv(FieldPrime p, int i, int j, int y1, int z1, int y2, int z2);
/// Same with w = 2^{-1} b1 (b1-1) y1 + 2^{-1} b2 (b2-1) y2 in place of v.
CVector two_copy_amplitudes_uw(FieldPrime p, int i, int j, int y1, int y2);

}  // namespace heis
