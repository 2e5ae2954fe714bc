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

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "heis/random.hpp"

namespace heis {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Global comparison tolerance: 1e-9 unless HEIS_HSP_TOLERANCE is set.
double default_tolerance();

/// Tolerance used when validating state normalization and density-matrix trace.
inline constexpr double kStateTolerance = 1e-10;

/// Dimensions of a tensor product of registers. Index convention is row-major: the
/// leftmost register is the most significant factor.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    RegisterLayout(std::initializer_list<std::size_t> dims) : RegisterLayout(std::vector<std::size_t>(dims)) {}
    explicit RegisterLayout(std::vector<std::size_t> dims);

    static RegisterLayout single(std::size_t dim) { return RegisterLayout({dim}); }

    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t size() const { return dims_.size(); }
    std::size_t operator[](std::size_t k) const { return dims_.at(k); }
    std::size_t total() const;

    /// Product of the dimensions to the right of register `which`.
    std::size_t stride(std::size_t which) const;

    std::vector<std::size_t> decode(std::size_t index) const;
    std::size_t encode(std::span<const std::size_t> digits) const;

    RegisterLayout concat(const RegisterLayout& other) const;

    bool operator==(const RegisterLayout&) const = default;

   private:
    std::vector<std::size_t> dims_;
};

class StateVector {
   public:
    /// Throws InvalidState unless the vector has unit norm.
    StateVector(CVector amplitudes, RegisterLayout layout);
    explicit StateVector(CVector amplitudes);

    static StateVector basis(RegisterLayout layout, std::size_t index);
    /// Normalizes `amplitudes`; throws ZeroProbabilityCollapse on a zero vector.
    static StateVector normalized(CVector amplitudes, RegisterLayout layout);

    const CVector& amplitudes() const { return amps_; }
    const RegisterLayout& layout() const { return layout_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
    Complex operator[](std::size_t k) const { return amps_(static_cast<Eigen::Index>(k)); }

   private:
    CVector amps_;
    RegisterLayout layout_;
};

class DensityMatrix {
   public:
    /// Throws InvalidState unless the matrix is Hermitian with unit trace. Positivity is
    /// checked separately by is_positive() since it needs an eigendecomposition.
    DensityMatrix(CMatrix entries, RegisterLayout layout);
    explicit DensityMatrix(CMatrix entries);

    static DensityMatrix pure(const StateVector& psi);
    static DensityMatrix maximally_mixed(RegisterLayout layout);
    /// Divides by the trace; throws ZeroProbabilityCollapse if the trace vanishes.
    static DensityMatrix normalized(CMatrix entries, RegisterLayout layout);

    const CMatrix& entries() const { return rho_; }
    const RegisterLayout& layout() const { return layout_; }
    std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }

    bool is_positive(double tol = 1e-9) const;
    double purity() const;
    /// The dominant eigenvector when purity is 1 within tol, phase-fixed so that its
    /// largest-magnitude entry is real and positive.
    std::optional<StateVector> as_pure(double tol = 1e-9) const;

   private:
    CMatrix rho_;
    RegisterLayout layout_;
};

/// Square operator between two layouts of equal total dimension. Unitarity is not
/// verified on construction; call is_unitary().
class UnitaryOp {
   public:
    UnitaryOp(CMatrix entries, RegisterLayout layout);
    UnitaryOp(CMatrix entries, RegisterLayout input_layout, RegisterLayout output_layout);

    static UnitaryOp identity(RegisterLayout layout);
    /// U|k> = |target[k]>; throws if `target` is not a bijection.
    static UnitaryOp permutation(RegisterLayout layout, std::span<const std::size_t> target);

    const CMatrix& entries() const { return u_; }
    const RegisterLayout& input_layout() const { return in_; }
    const RegisterLayout& output_layout() const { return out_; }
    std::size_t dimension() const { return static_cast<std::size_t>(u_.rows()); }

    UnitaryOp adjoint() const;
    bool is_unitary(double tol = default_tolerance()) const;

   private:
    CMatrix u_;
    RegisterLayout in_, out_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

StateVector tensor(const StateVector& a, const StateVector& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

/// U psi; throws LayoutMismatch unless psi's layout equals U's input layout.
StateVector apply(const UnitaryOp& u, const StateVector& psi);
/// U rho U^dagger.
DensityMatrix apply(const UnitaryOp& u, const DensityMatrix& rho);

template <typename State>
struct MeasurementBranch {
    std::size_t outcome = 0;
    double probability = 0.0;
    std::optional<State> state;  // empty when probability is zero
};

/// Exact projective measurement of one register in its computational basis: one branch
/// per outcome with the renormalized post-measurement state.
std::vector<MeasurementBranch<StateVector>> measure_register(const StateVector& psi, std::size_t which);
std::vector<MeasurementBranch<DensityMatrix>> measure_register(const DensityMatrix& rho, std::size_t which);

/// Sampled measurement drawing a single outcome.
MeasurementBranch<StateVector> measure_register(const StateVector& psi, std::size_t which, Rng& rng);
MeasurementBranch<DensityMatrix> measure_register(const DensityMatrix& rho, std::size_t which, Rng& rng);

/// Post-measurement state for a chosen outcome; throws ZeroProbabilityCollapse if the
/// outcome has (numerically) zero probability.
StateVector collapse(const StateVector& psi, std::size_t which, std::size_t outcome);
DensityMatrix collapse(const DensityMatrix& rho, std::size_t which, std::size_t outcome);

/// Outcome distribution of a register without building collapsed states.
std::vector<double> register_distribution(const StateVector& psi, std::size_t which);
std::vector<double> register_distribution(const DensityMatrix& rho, std::size_t which);

/// Reduced state on the registers in `keep` (kept in their original order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep);

/// |<a|b>|^2.
double fidelity_pure(const StateVector& a, const StateVector& b);

double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// P m P^dagger for the basis permutation P|k> = |target[k]>, in O(n^2).
CMatrix conjugate_by_permutation(const CMatrix& m, std::span<const std::size_t> target);

}  // namespace heis
