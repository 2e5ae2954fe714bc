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
#include <string>
#include <vector>

#include "heis/heisenberg_group.hpp"
#include "heis/quantum_linalg.hpp"

namespace heis {

/// Label of an irreducible representation of H_p: the character chi_{a,b} or the
/// p-dimensional sigma_k (k != 0).
struct IrrepLabel {
    enum class Kind { OneDim, PDim };

    Kind kind = Kind::OneDim;
    int a = 0;
    int b = 0;
    int k = 0;

    static IrrepLabel one_dim(int a, int b) { return {Kind::OneDim, a, b, 0}; }
    static IrrepLabel p_dim(int k) { return {Kind::PDim, 0, 0, k}; }

    bool is_one_dim() const { return kind == Kind::OneDim; }
    std::size_t dimension(FieldPrime p) const { return is_one_dim() ? 1 : static_cast<std::size_t>(p.value()); }

    bool operator==(const IrrepLabel&) const = default;
};

std::string to_string(const IrrepLabel& mu);
std::ostream& operator<<(std::ostream& os, const IrrepLabel& mu);

/// Throws InvalidLabel if the label is out of range for p (or k = 0).
void validate(const IrrepLabel& mu, FieldPrime p);

/// All p^2 + p - 1 irreps: chi_{a,b} in (a, b) lexicographic order, then sigma_1..sigma_{p-1}.
std::vector<IrrepLabel> all_irreps(FieldPrime p);
/// Position of `mu` in all_irreps(p).
std::size_t irrep_position(FieldPrime p, const IrrepLabel& mu);

/// Table of powers of omega = exp(2 pi i / p).
class RootsOfUnity {
   public:
    explicit RootsOfUnity(FieldPrime p);
    Complex operator()(std::int64_t power) const { return table_[static_cast<std::size_t>(mod(power, p_))]; }

   private:
    int p_;
    std::vector<Complex> table_;
};

Complex omega_power(FieldPrime p, std::int64_t power);

/// D_mu(g). One-dimensional: omega^{a x + b z}. p-dimensional:
/// omega^{k y} sum_r omega^{k z r} |r + x><r| in the computational basis.
///
/// Under the multiplication (x,y,z)(x',y',z') = (x+x', y+y'+xz', z+z') the p-dimensional
/// matrices compose in reverse order, D(g1) D(g2) = D(g2 g1); g -> D(g^{-1}) is the
/// corresponding representation. The one-dimensional ones satisfy both orders.
CMatrix irrep_matrix(const IrrepLabel& mu, const GroupElement& g);
UnitaryOp irrep_operator(const IrrepLabel& mu, const GroupElement& g);

/// Trace of irrep_matrix.
Complex character(const IrrepLabel& mu, const GroupElement& g);
/// delta_{x,0} delta_{z,0} p omega^{k y} for sigma_k, omega^{a x + b z} for chi_{a,b}.
Complex character_closed_form(const IrrepLabel& mu, const GroupElement& g);

enum class Side { Left, Right };

/// Basis permutation of the regular representation: R_L(g)|h> = |g h>, R_R(g)|h> = |h g^{-1}>.
/// Entry k is the index of the image of basis element k.
std::vector<std::size_t> regular_permutation(Side side, const GroupElement& g);
UnitaryOp regular_rep(Side side, const GroupElement& g);

/// Index bookkeeping for the Fourier basis |mu, i, j>: irreps in all_irreps order, each
/// contributing d_mu^2 consecutive coordinates with index offset(mu) + i d_mu + j.
class FourierLayout {
   public:
    explicit FourierLayout(FieldPrime p);

    const std::vector<IrrepLabel>& irreps() const { return irreps_; }
    std::size_t offset(std::size_t irrep_pos) const { return offsets_[irrep_pos]; }
    std::size_t dimension(std::size_t irrep_pos) const { return dims_[irrep_pos]; }
    std::size_t index(std::size_t irrep_pos, std::size_t i, std::size_t j) const {
        return offsets_[irrep_pos] + i * dims_[irrep_pos] + j;
    }
    std::size_t total() const { return total_; }

   private:
    std::vector<IrrepLabel> irreps_;
    std::vector<std::size_t> offsets_, dims_;
    std::size_t total_ = 0;
};

/// The Fourier transform over H_p,
///   Q = sum_g sum_mu sum_{i,j} sqrt(d_mu / |G|) [D_mu(g)]_{i,j} |mu, i, j><g|.
/// Then Q R_R(g) Q^dagger = (+)_mu D_mu(g^{-1}) (x) I (row index carries the right action)
/// and Q R_L(g) Q^dagger = (+)_mu I (x) D_mu(g)^T.
/// Cached per prime; the returned reference stays valid for the life of the program.
const UnitaryOp& qft_matrix(FieldPrime p);

/// The block-diagonal matrix Q R(g) Q^dagger should equal, assembled from irreps only.
CMatrix regular_rep_fourier_blocks(Side side, const GroupElement& g);

/// C_mu = (d_mu / |G|) sum_g conj(chi_mu(g)) R_R(g).
CMatrix character_projector(const IrrepLabel& mu, FieldPrime p);

}  // namespace heis
