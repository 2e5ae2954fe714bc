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

#include "heis/quantum_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "heis/errors.hpp"

namespace heis {

namespace {

using Index = Eigen::Index;

Index ix(std::size_t k) { return static_cast<Index>(k); }

void require_layout(const RegisterLayout& layout, std::size_t dim, const char* what) {
    if (layout.total() != dim) {
        throw LayoutMismatch(std::string(what) + ": layout total " + std::to_string(layout.total()) +
                             " does not match dimension " + std::to_string(dim));
    }
}

/// Full indices grouped by the digit of register `which`.
std::vector<std::vector<std::size_t>> indices_by_digit(const RegisterLayout& layout, std::size_t which) {
    if (which >= layout.size()) throw LayoutMismatch("register index out of range");
    const std::size_t stride = layout.stride(which), dim = layout[which];
    std::vector<std::vector<std::size_t>> out(dim);
    for (std::size_t k = 0; k < layout.total(); ++k) out[(k / stride) % dim].push_back(k);
    return out;
}

}  // namespace

double default_tolerance() {
    static const double tol = [] {
        if (const char* env = std::getenv("HEIS_HSP_TOLERANCE")) {
            char* end = nullptr;
            double v = std::strtod(env, &end);
            if (end != env && v > 0.0) return v;
        }
        return 1e-9;
    }();
    return tol;
}

// -- RegisterLayout -----------------------------------------------------------

RegisterLayout::RegisterLayout(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    for (auto d : dims_) {
        if (d == 0) throw LayoutMismatch("register dimensions must be positive");
    }
}

std::size_t RegisterLayout::total() const {
    return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t RegisterLayout::stride(std::size_t which) const {
    std::size_t s = 1;
    for (std::size_t k = which + 1; k < dims_.size(); ++k) s *= dims_[k];
    return s;
}

std::vector<std::size_t> RegisterLayout::decode(std::size_t index) const {
    std::vector<std::size_t> digits(dims_.size());
    for (std::size_t k = dims_.size(); k-- > 0;) {
        digits[k] = index % dims_[k];
        index /= dims_[k];
    }
    return digits;
}

std::size_t RegisterLayout::encode(std::span<const std::size_t> digits) const {
    if (digits.size() != dims_.size()) throw LayoutMismatch("digit count does not match register count");
    std::size_t index = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (digits[k] >= dims_[k]) throw LayoutMismatch("digit out of range");
        index = index * dims_[k] + digits[k];
    }
    return index;
}

RegisterLayout RegisterLayout::concat(const RegisterLayout& other) const {
    auto dims = dims_;
    dims.insert(dims.end(), other.dims_.begin(), other.dims_.end());
    return RegisterLayout(std::move(dims));
}

// -- StateVector --------------------------------------------------------------

StateVector::StateVector(CVector amplitudes, RegisterLayout layout)
    : amps_(std::move(amplitudes)), layout_(std::move(layout)) {
    require_layout(layout_, dimension(), "StateVector");
    if (std::abs(amps_.norm() - 1.0) > kStateTolerance) {
        throw InvalidState("state vector norm " + std::to_string(amps_.norm()) + " is not 1");
    }
}

StateVector::StateVector(CVector amplitudes)
    : StateVector(amplitudes, RegisterLayout::single(static_cast<std::size_t>(amplitudes.size()))) {}

StateVector StateVector::basis(RegisterLayout layout, std::size_t index) {
    CVector v = CVector::Zero(ix(layout.total()));
    if (index >= layout.total()) throw LayoutMismatch("basis index out of range");
    v(ix(index)) = 1.0;
    return StateVector(std::move(v), std::move(layout));
}

StateVector StateVector::normalized(CVector amplitudes, RegisterLayout layout) {
    const double n = amplitudes.norm();
    if (n < 1e-300) throw ZeroProbabilityCollapse("cannot normalize a zero vector");
    return StateVector(amplitudes / n, std::move(layout));
}

// -- DensityMatrix ------------------------------------------------------------

DensityMatrix::DensityMatrix(CMatrix entries, RegisterLayout layout)
    : rho_(std::move(entries)), layout_(std::move(layout)) {
    if (rho_.rows() != rho_.cols()) throw InvalidState("density matrix must be square");
    require_layout(layout_, dimension(), "DensityMatrix");
    if (std::abs(rho_.trace() - Complex(1.0)) > kStateTolerance) {
        throw InvalidState("density matrix trace is not 1");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw InvalidState("density matrix is not Hermitian");
    }
}

DensityMatrix::DensityMatrix(CMatrix entries)
    : DensityMatrix(entries, RegisterLayout::single(static_cast<std::size_t>(entries.rows()))) {}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint(), psi.layout());
}

DensityMatrix DensityMatrix::maximally_mixed(RegisterLayout layout) {
    const auto n = ix(layout.total());
    return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n), std::move(layout));
}

DensityMatrix DensityMatrix::normalized(CMatrix entries, RegisterLayout layout) {
    const double t = entries.trace().real();
    if (t < 1e-300) throw ZeroProbabilityCollapse("cannot normalize a density matrix with zero trace");
    CMatrix rho = entries / t;
    // Remove rounding asymmetry before the Hermiticity check.
    rho = (rho + rho.adjoint()).eval() * 0.5;
    return DensityMatrix(std::move(rho), std::move(layout));
}

bool DensityMatrix::is_positive(double tol) const {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

std::optional<StateVector> DensityMatrix::as_pure(double tol) const {
    if (std::abs(purity() - 1.0) > tol) return std::nullopt;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_);
    CVector v = es.eigenvectors().col(rho_.rows() - 1);
    Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    v *= std::conj(v(k)) / std::abs(v(k));
    return StateVector(v / v.norm(), layout_);
}

// -- UnitaryOp ----------------------------------------------------------------

UnitaryOp::UnitaryOp(CMatrix entries, RegisterLayout layout) : UnitaryOp(std::move(entries), layout, layout) {}

UnitaryOp::UnitaryOp(CMatrix entries, RegisterLayout input_layout, RegisterLayout output_layout)
    : u_(std::move(entries)), in_(std::move(input_layout)), out_(std::move(output_layout)) {
    if (u_.rows() != u_.cols()) throw LayoutMismatch("operator must be square");
    require_layout(in_, dimension(), "UnitaryOp input");
    require_layout(out_, dimension(), "UnitaryOp output");
}

UnitaryOp UnitaryOp::identity(RegisterLayout layout) {
    const auto n = ix(layout.total());
    return UnitaryOp(CMatrix::Identity(n, n), std::move(layout));
}

UnitaryOp UnitaryOp::permutation(RegisterLayout layout, std::span<const std::size_t> target) {
    const std::size_t n = layout.total();
    if (target.size() != n) throw LayoutMismatch("permutation size does not match layout");
    std::vector<bool> hit(n, false);
    CMatrix m = CMatrix::Zero(ix(n), ix(n));
    for (std::size_t k = 0; k < n; ++k) {
        if (target[k] >= n || hit[target[k]]) throw LayoutMismatch("map is not a permutation");
        hit[target[k]] = true;
        m(ix(target[k]), ix(k)) = 1.0;
    }
    return UnitaryOp(std::move(m), std::move(layout));
}

UnitaryOp UnitaryOp::adjoint() const { return UnitaryOp(u_.adjoint(), out_, in_); }

bool UnitaryOp::is_unitary(double tol) const {
    const auto n = u_.rows();
    return (u_.adjoint() * u_ - CMatrix::Identity(n, n)).norm() <= tol;
}

// -- operations ---------------------------------------------------------------

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    CVector v(a.amplitudes().size() * b.amplitudes().size());
    for (Index i = 0; i < a.amplitudes().size(); ++i) {
        v.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()(i) * b.amplitudes();
    }
    return StateVector(std::move(v), a.layout().concat(b.layout()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    return DensityMatrix(kron(a.entries(), b.entries()), a.layout().concat(b.layout()));
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
    return UnitaryOp(kron(a.entries(), b.entries()), a.input_layout().concat(b.input_layout()),
                     a.output_layout().concat(b.output_layout()));
}

StateVector apply(const UnitaryOp& u, const StateVector& psi) {
    if (u.input_layout() != psi.layout()) throw LayoutMismatch("apply: state layout does not match operator");
    CVector out = u.entries() * psi.amplitudes();
    return StateVector(std::move(out), u.output_layout());
}

DensityMatrix apply(const UnitaryOp& u, const DensityMatrix& rho) {
    if (u.input_layout() != rho.layout()) throw LayoutMismatch("apply: state layout does not match operator");
    CMatrix out = u.entries() * rho.entries() * u.entries().adjoint();
    out = (out + out.adjoint()).eval() * 0.5;
    return DensityMatrix(std::move(out), u.output_layout());
}

std::vector<double> register_distribution(const StateVector& psi, std::size_t which) {
    auto groups = indices_by_digit(psi.layout(), which);
    std::vector<double> probs(groups.size(), 0.0);
    for (std::size_t o = 0; o < groups.size(); ++o) {
        for (auto k : groups[o]) probs[o] += std::norm(psi[k]);
    }
    return probs;
}

std::vector<double> register_distribution(const DensityMatrix& rho, std::size_t which) {
    auto groups = indices_by_digit(rho.layout(), which);
    std::vector<double> probs(groups.size(), 0.0);
    for (std::size_t o = 0; o < groups.size(); ++o) {
        for (auto k : groups[o]) probs[o] += rho.entries()(ix(k), ix(k)).real();
    }
    return probs;
}

StateVector collapse(const StateVector& psi, std::size_t which, std::size_t outcome) {
    auto groups = indices_by_digit(psi.layout(), which);
    if (outcome >= groups.size()) throw LayoutMismatch("outcome out of range");
    CVector v = CVector::Zero(psi.amplitudes().size());
    for (auto k : groups[outcome]) v(ix(k)) = psi[k];
    if (v.squaredNorm() < 1e-24) throw ZeroProbabilityCollapse("collapse onto a zero-probability outcome");
    return StateVector::normalized(std::move(v), psi.layout());
}

DensityMatrix collapse(const DensityMatrix& rho, std::size_t which, std::size_t outcome) {
    auto groups = indices_by_digit(rho.layout(), which);
    if (outcome >= groups.size()) throw LayoutMismatch("outcome out of range");
    const auto& keep = groups[outcome];
    CMatrix m = CMatrix::Zero(rho.entries().rows(), rho.entries().cols());
    double trace = 0.0;
    for (auto r : keep) {
        trace += rho.entries()(ix(r), ix(r)).real();
        for (auto c : keep) m(ix(r), ix(c)) = rho.entries()(ix(r), ix(c));
    }
    if (trace < 1e-24) throw ZeroProbabilityCollapse("collapse onto a zero-probability outcome");
    return DensityMatrix::normalized(std::move(m), rho.layout());
}

namespace {

template <typename State>
std::vector<MeasurementBranch<State>> measure_exact(const State& s, std::size_t which) {
    auto probs = register_distribution(s, which);
    std::vector<MeasurementBranch<State>> out;
    out.reserve(probs.size());
    for (std::size_t o = 0; o < probs.size(); ++o) {
        MeasurementBranch<State> b{o, probs[o], std::nullopt};
        if (probs[o] > 1e-24) b.state = collapse(s, which, o);
        out.push_back(std::move(b));
    }
    return out;
}

template <typename State>
MeasurementBranch<State> measure_sampled(const State& s, std::size_t which, Rng& rng) {
    auto probs = register_distribution(s, which);
    const std::size_t o = sample_index(probs, rng);
    return {o, probs[o], collapse(s, which, o)};
}

}  // namespace

std::vector<MeasurementBranch<StateVector>> measure_register(const StateVector& psi, std::size_t which) {
    return measure_exact(psi, which);
}

std::vector<MeasurementBranch<DensityMatrix>> measure_register(const DensityMatrix& rho, std::size_t which) {
    return measure_exact(rho, which);
}

MeasurementBranch<StateVector> measure_register(const StateVector& psi, std::size_t which, Rng& rng) {
    return measure_sampled(psi, which, rng);
}

MeasurementBranch<DensityMatrix> measure_register(const DensityMatrix& rho, std::size_t which, Rng& rng) {
    return measure_sampled(rho, which, rng);
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<std::size_t> keep) {
    const auto& layout = rho.layout();
    if (keep.empty()) throw LayoutMismatch("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    if (keep.back() >= layout.size()) throw LayoutMismatch("partial_trace: register index out of range");

    std::vector<std::size_t> kept_dims, traced_dims;
    std::vector<bool> is_kept(layout.size(), false);
    for (auto k : keep) is_kept[k] = true;
    for (std::size_t r = 0; r < layout.size(); ++r) (is_kept[r] ? kept_dims : traced_dims).push_back(layout[r]);
    RegisterLayout kept_layout(kept_dims), traced_layout(traced_dims);

    // Bucket every full index by its traced-register coordinate.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> buckets(traced_layout.total());
    for (std::size_t full = 0; full < layout.total(); ++full) {
        auto digits = layout.decode(full);
        std::size_t kept_ix = 0, traced_ix = 0;
        for (std::size_t r = 0; r < layout.size(); ++r) {
            if (is_kept[r]) {
                kept_ix = kept_ix * layout[r] + digits[r];
            } else {
                traced_ix = traced_ix * layout[r] + digits[r];
            }
        }
        buckets[traced_ix].emplace_back(full, kept_ix);
    }

    CMatrix out = CMatrix::Zero(ix(kept_layout.total()), ix(kept_layout.total()));
    for (const auto& bucket : buckets) {
        for (auto [fi, ki] : bucket) {
            for (auto [fj, kj] : bucket) out(ix(ki), ix(kj)) += rho.entries()(ix(fi), ix(fj));
        }
    }
    return DensityMatrix::normalized(std::move(out), std::move(kept_layout));
}

double fidelity_pure(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) throw LayoutMismatch("fidelity_pure: dimension mismatch");
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw LayoutMismatch("max_abs_diff: shape mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

CMatrix conjugate_by_permutation(const CMatrix& m, std::span<const std::size_t> target) {
    if (target.size() != static_cast<std::size_t>(m.rows())) throw LayoutMismatch("permutation size mismatch");
    CMatrix out(m.rows(), m.cols());
    for (std::size_t c = 0; c < target.size(); ++c) {
        for (std::size_t r = 0; r < target.size(); ++r) out(ix(target[r]), ix(target[c])) = m(ix(r), ix(c));
    }
    return out;
}

}  // namespace heis
