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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "heis/errors.hpp"

namespace heis {
namespace {

CVector random_vector(std::size_t n, Rng& rng) {
    std::normal_distribution<double> g;
    CVector v(static_cast<Eigen::Index>(n));
    for (auto& a : v) a = Complex(g(rng), g(rng));
    return v;
}

StateVector random_state(RegisterLayout layout, Rng& rng) {
    return StateVector::normalized(random_vector(layout.total(), rng), layout);
}

DensityMatrix random_density(RegisterLayout layout, Rng& rng, int rank = 3) {
    const std::size_t n = layout.total();
    CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (int r = 0; r < rank; ++r) {
        const CVector v = random_vector(n, rng);
        rho += v * v.adjoint();
    }
    return DensityMatrix::normalized(rho, layout);
}

UnitaryOp random_unitary(RegisterLayout layout, Rng& rng) {
    const std::size_t n = layout.total();
    CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < m.cols(); ++c) m.col(c) = random_vector(n, rng);
    Eigen::HouseholderQR<CMatrix> qr(m);
    return UnitaryOp(qr.householderQ() * CMatrix::Identity(m.rows(), m.cols()), layout);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(RegisterLayout, EncodeDecodeRowMajor) {
    const RegisterLayout l({2, 3, 4});
    EXPECT_EQ(l.total(), 24u);
    EXPECT_EQ(l.stride(0), 12u);
    EXPECT_EQ(l.stride(2), 1u);
    const std::vector<std::size_t> digits{1, 2, 3};
    EXPECT_EQ(l.encode(digits), 1u * 12 + 2 * 4 + 3);
    for (std::size_t k = 0; k < l.total(); ++k) EXPECT_EQ(l.encode(l.decode(k)), k);
    EXPECT_EQ(l.concat(RegisterLayout({5})), RegisterLayout({2, 3, 4, 5}));
}

TEST(StateVector, RejectsUnnormalized) {
    CVector v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(StateVector{v}, InvalidState);
    EXPECT_THROW(StateVector::normalized(CVector::Zero(3), RegisterLayout::single(3)), ZeroProbabilityCollapse);
    EXPECT_THROW(StateVector(CVector::Ones(4) / 2.0, RegisterLayout({3})), LayoutMismatch);
}

TEST(DensityMatrix, RejectsNonHermitianOrWrongTrace) {
    CMatrix m = CMatrix::Identity(2, 2) / 2.0;
    m(0, 1) = 0.3;
    EXPECT_THROW(DensityMatrix{m}, InvalidState);
    EXPECT_THROW(DensityMatrix{CMatrix::Identity(2, 2)}, InvalidState);
    EXPECT_NO_THROW(DensityMatrix{CMatrix::Identity(2, 2) / 2.0});
}

TEST(DensityMatrix, PurityAndPureExtraction) {
    Rng rng = make_stream(1, 0);
    const auto psi = random_state(RegisterLayout::single(5), rng);
    const auto rho = DensityMatrix::pure(psi);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
    ASSERT_TRUE(rho.as_pure().has_value());
    EXPECT_NEAR(fidelity_pure(*rho.as_pure(), psi), 1.0, 1e-12);
    const auto mixed = DensityMatrix::maximally_mixed(RegisterLayout::single(4));
    EXPECT_NEAR(mixed.purity(), 0.25, 1e-12);
    EXPECT_FALSE(mixed.as_pure().has_value());
    EXPECT_TRUE(random_density(RegisterLayout({2, 3}), rng).is_positive());
}

TEST(UnitaryOp, PermutationValidation) {
    const std::vector<std::size_t> bad{0, 0, 1};
    EXPECT_THROW(UnitaryOp::permutation(RegisterLayout::single(3), bad), Error);
    const std::vector<std::size_t> cyc{1, 2, 0};
    const auto u = UnitaryOp::permutation(RegisterLayout::single(3), cyc);
    EXPECT_TRUE(u.is_unitary());
    EXPECT_EQ(u.entries()(1, 0), Complex(1.0));
}

TEST(Tensor, Examples) {
    const auto i6 = tensor(UnitaryOp::identity(RegisterLayout::single(2)), UnitaryOp::identity(RegisterLayout::single(3)));
    EXPECT_EQ(max_abs_diff(i6.entries(), CMatrix::Identity(6, 6)), 0.0);
    EXPECT_EQ(i6.input_layout(), RegisterLayout({2, 3}));

    const auto v = tensor(StateVector::basis(RegisterLayout::single(2), 0), StateVector::basis(RegisterLayout::single(3), 1));
    EXPECT_EQ(v.layout(), RegisterLayout({2, 3}));
    EXPECT_EQ(max_abs_diff(v.amplitudes(), StateVector::basis(RegisterLayout({2, 3}), 1).amplitudes()), 0.0);
}

TEST(Tensor, NormsMultiply) {
    Rng rng = make_stream(2, 0);
    const CVector a = random_vector(3, rng), b = random_vector(4, rng);
    EXPECT_NEAR(kron(a, b).norm(), a.norm() * b.norm(), 1e-12);
}

TEST(Apply, IdentityPermutationAndInverse) {
    Rng rng = make_stream(3, 0);
    const RegisterLayout l({2, 3});
    const auto psi = random_state(l, rng);
    EXPECT_LT(max_abs_diff(apply(UnitaryOp::identity(l), psi).amplitudes(), psi.amplitudes()), 1e-15);

    const std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    const auto moved = apply(UnitaryOp::permutation(l, perm), StateVector::basis(l, 2));
    EXPECT_NEAR(std::abs(moved[5]), 1.0, 1e-15);

    const auto u = random_unitary(l, rng);
    EXPECT_TRUE(u.is_unitary());
    EXPECT_LT(max_abs_diff(apply(u, apply(u.adjoint(), psi)).amplitudes(), psi.amplitudes()), 1e-10);
    const auto rho = random_density(l, rng);
    const auto out = apply(u, rho);
    EXPECT_NEAR(out.entries().trace().real(), 1.0, 1e-10);
    EXPECT_TRUE(out.is_positive());
    EXPECT_LT(max_abs_diff(apply(u, apply(u.adjoint(), rho)).entries(), rho.entries()), 1e-10);
}

TEST(Apply, LayoutMismatchThrows) {
    const auto psi = StateVector::basis(RegisterLayout({2, 3}), 0);
    EXPECT_THROW(apply(UnitaryOp::identity(RegisterLayout({3, 2})), psi), LayoutMismatch);
}

TEST(Measure, UniformState) {
    const std::size_t p = 5;
    const auto psi = StateVector::normalized(CVector::Ones(p), RegisterLayout::single(p));
    for (const auto& b : measure_register(psi, 0)) EXPECT_NEAR(b.probability, 0.2, 1e-12);
}

TEST(Measure, BasisState) {
    const auto psi = StateVector::basis(RegisterLayout::single(5), 3);
    const auto branches = measure_register(psi, 0);
    for (const auto& b : branches) {
        EXPECT_NEAR(b.probability, b.outcome == 3 ? 1.0 : 0.0, 1e-15);
        EXPECT_EQ(b.state.has_value(), b.outcome == 3);
    }
    EXPECT_THROW(collapse(psi, 0, 1), ZeroProbabilityCollapse);
}

TEST(Measure, BellState) {
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0 / std::sqrt(2.0);
    const StateVector bell(v, RegisterLayout({2, 2}));
    const auto branches = measure_register(bell, 0);
    ASSERT_EQ(branches.size(), 2u);
    EXPECT_NEAR(branches[0].probability, 0.5, 1e-12);
    EXPECT_NEAR(branches[1].probability, 0.5, 1e-12);
    EXPECT_NEAR(std::abs((*branches[0].state)[0]), 1.0, 1e-12);
    EXPECT_NEAR(std::abs((*branches[1].state)[3]), 1.0, 1e-12);

    const auto rho_branches = measure_register(DensityMatrix::pure(bell), 1);
    EXPECT_NEAR(rho_branches[1].probability, 0.5, 1e-12);
    EXPECT_NEAR(std::abs(rho_branches[1].state->entries()(3, 3)), 1.0, 1e-12);
}

TEST(Measure, PropertyDistributionsSumToOne) {
    Rng rng = make_stream(4, 0);
    const RegisterLayout l({3, 4, 2});
    for (int t = 0; t < 20; ++t) {
        const auto psi = random_state(l, rng);
        const auto rho = random_density(l, rng);
        for (std::size_t w = 0; w < l.size(); ++w) {
            EXPECT_NEAR(sum(register_distribution(psi, w)), 1.0, 1e-10);
            EXPECT_NEAR(sum(register_distribution(rho, w)), 1.0, 1e-10);
            double total = 0.0;
            for (const auto& b : measure_register(rho, w)) {
                total += b.probability;
                if (b.state) {
                    EXPECT_NEAR(b.state->entries().trace().real(), 1.0, 1e-10);
                }
            }
            EXPECT_NEAR(total, 1.0, 1e-10);
        }
    }
}

TEST(Measure, SampledMatchesFrequencies) {
    Rng rng = make_stream(5, 0);
    CVector v(3);
    v << std::sqrt(0.5), std::sqrt(0.3), std::sqrt(0.2);
    const StateVector psi(v);
    std::vector<int> counts(3, 0);
    const int n = 20000;
    for (int t = 0; t < n; ++t) ++counts[measure_register(psi, 0, rng).outcome];
    const std::vector<double> expected{0.5, 0.3, 0.2};
    for (int k = 0; k < 3; ++k) {
        const double sigma = std::sqrt(expected[k] * (1 - expected[k]) / n);
        EXPECT_NEAR(counts[k] / static_cast<double>(n), expected[k], 4 * sigma);
    }
}

TEST(PartialTrace, ProductInputsRecoverFactors) {
    Rng rng = make_stream(6, 0);
    const auto a = random_density(RegisterLayout::single(3), rng);
    const auto b = random_density(RegisterLayout::single(4), rng);
    const auto ab = tensor(a, b);
    EXPECT_LT(max_abs_diff(partial_trace(ab, {0}).entries(), a.entries()), 1e-12);
    EXPECT_LT(max_abs_diff(partial_trace(ab, {1}).entries(), b.entries()), 1e-12);
}

TEST(PartialTrace, MaximallyEntangled) {
    const std::size_t d = 4;
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k * d + k)) = 1.0 / std::sqrt(double(d));
    const auto reduced = partial_trace(DensityMatrix::pure(StateVector(v, RegisterLayout({d, d}))), {1});
    EXPECT_LT(max_abs_diff(reduced.entries(), CMatrix::Identity(4, 4) / 4.0), 1e-12);
}

TEST(PartialTrace, ThreeRegistersKeepsOrderAndPositivity) {
    Rng rng = make_stream(7, 0);
    const auto a = random_density(RegisterLayout::single(2), rng);
    const auto b = random_density(RegisterLayout::single(3), rng);
    const auto c = random_density(RegisterLayout::single(2), rng);
    const auto abc = tensor(tensor(a, b), c);
    const auto ac = partial_trace(abc, {0, 2});
    EXPECT_EQ(ac.layout(), RegisterLayout({2, 2}));
    EXPECT_LT(max_abs_diff(ac.entries(), tensor(a, c).entries()), 1e-12);
    const auto mixed = partial_trace(random_density(RegisterLayout({2, 3, 2}), rng), {2, 1});
    EXPECT_NEAR(mixed.entries().trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(mixed.is_positive());
}

TEST(Fidelity, Examples) {
    Rng rng = make_stream(8, 0);
    const auto a = random_state(RegisterLayout::single(6), rng);
    EXPECT_NEAR(fidelity_pure(a, a), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_pure(StateVector::basis(RegisterLayout::single(3), 0), StateVector::basis(RegisterLayout::single(3), 2)),
                0.0, 1e-15);
    const StateVector rotated(a.amplitudes() * std::polar(1.0, 0.7), a.layout());
    EXPECT_NEAR(fidelity_pure(a, rotated), 1.0, 1e-12);
}

TEST(ConjugateByPermutation, MatchesDenseProduct) {
    Rng rng = make_stream(9, 0);
    const auto rho = random_density(RegisterLayout::single(5), rng);
    const std::vector<std::size_t> perm{2, 4, 1, 0, 3};
    const auto u = UnitaryOp::permutation(RegisterLayout::single(5), perm);
    EXPECT_LT(max_abs_diff(conjugate_by_permutation(rho.entries(), perm), u.entries() * rho.entries() * u.entries().adjoint()),
              1e-15);
}

TEST(Tolerance, DefaultWithoutOverride) {
    if (std::getenv("HEIS_HSP_TOLERANCE") != nullptr) GTEST_SKIP() << "tolerance overridden by environment";
    EXPECT_EQ(default_tolerance(), 1e-9);
}

}  // namespace
}  // namespace heis
