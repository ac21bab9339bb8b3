// Copyright 2026 The NCQF Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "gen.hpp"
#include "ncqf/errors.hpp"
#include "ncqf/qmath.hpp"

namespace ncqf {
namespace {

using testing::Gen;

TEST(Kron, LeftmostFactorIsMostSignificant) {
    Operator zi = pauli_string("ZI");
    EXPECT_NEAR(zi(0, 0).real(), 1.0, 0.0);
    EXPECT_NEAR(zi(1, 1).real(), 1.0, 0.0);
    EXPECT_NEAR(zi(2, 2).real(), -1.0, 0.0);
    EXPECT_NEAR(zi(3, 3).real(), -1.0, 0.0);

    Ket eg = basis_ket("eg");
    EXPECT_EQ(eg(1), cplx(1.0, 0.0));
    Ket ge = basis_ket("10");
    EXPECT_EQ(ge(2), cplx(1.0, 0.0));
}

TEST(Kron, ListMatchesPairwise) {
    Gen g(1);
    Operator a = g.gaussian(2), b = g.gaussian(2), c = g.gaussian(2);
    Operator lhs = kron({a, b, c});
    Operator rhs = kron(kron(a, b), c);
    EXPECT_LT((lhs - rhs).norm(), 1e-14);
}

TEST(Ops, ExcitedStateIsZeroIndex) {
    Ket e = basis_ket("e");
    EXPECT_NEAR(expect(projector(e), ops::sigma_z()).real(), 1.0, 1e-15);
    // sigma_minus lowers e to g.
    Ket g = ops::sigma_minus() * e;
    EXPECT_EQ(g(1), cplx(1.0, 0.0));
    EXPECT_LT((ops::sigma_plus() - ops::sigma_minus().adjoint()).norm(), 1e-15);
}

TEST(Ops, ProductOperatorSymbols) {
    Operator em = product_operator("e-");
    Operator ref = kron(projector(basis_ket("e")), ops::sigma_minus());
    EXPECT_LT((em - ref).norm(), 1e-15);
    EXPECT_THROW(pauli_string("X-"), ValidationError);
    EXPECT_THROW(product_operator("Q"), ValidationError);
}

TEST(Ops, EmbedMatchesPauliString) {
    EXPECT_LT((embed(ops::sigma_y(), 2, 4) - pauli_string("IIYI")).norm(), 1e-15);
}

TEST(HermEig, ReconstructsAndSortsDescending) {
    Gen g(2);
    for (int dim : {2, 4, 8, 16, 32}) {
        Operator h = g.hermitian(dim);
        EigDecomposition e = herm_eig(h);
        EXPECT_LT((e.reconstruct() - h).norm(), 1e-11 * dim);
        for (int k = 1; k < dim; ++k) EXPECT_GE(e.values(k - 1), e.values(k));
        EXPECT_LT((e.vectors.adjoint() * e.vectors - Operator::Identity(dim, dim)).norm(), 1e-12 * dim);
    }
}

TEST(HermEig, RejectsNonHermitian) {
    Operator a = ops::sigma_minus();
    EXPECT_THROW(herm_eig(a), ValidationError);
}

TEST(HermEig, DegenerateBlocks) {
    Eigen::VectorXd d(5);
    d << 1.0, 0.5, 0.5, 0.5 + 1e-12, 0.0;
    Operator h = d.cast<cplx>().asDiagonal();
    auto blocks = herm_eig(h).degenerate_blocks();
    ASSERT_EQ(blocks.size(), 3u);
    EXPECT_EQ(blocks[1], std::make_pair(1, 4));
}

TEST(UnitaryExp, MatchesMatrixExponential) {
    Gen g(3);
    for (int dim : {2, 4, 8}) {
        Operator h = g.hermitian(dim);
        Operator ref = (Operator(-kI * h)).exp();
        EXPECT_LT((unitary_exp(h) - ref).norm(), 1e-11);
    }
}

TEST(Concurrence, PartiallyEntangledPureState) {
    for (double theta : {0.0, 0.1, 0.4, M_PI / 4, 1.2}) {
        Ket psi = std::cos(theta) * basis_ket("ee") + std::sin(theta) * basis_ket("gg");
        EXPECT_NEAR(concurrence(QuantumState::from_ket(psi)), std::abs(std::sin(2 * theta)), 1e-10);
    }
}

TEST(Concurrence, WernerState) {
    Operator singlet = projector(bell::psi_minus());
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.9, 1.0}) {
        Operator rho = p * singlet + (1 - p) * Operator::Identity(4, 4) / 4.0;
        EXPECT_NEAR(concurrence(QuantumState(rho)), std::max(0.0, (3 * p - 1) / 2), 1e-9) << p;
    }
}

TEST(Concurrence, ProductStatesAreZero) {
    Gen g(4);
    for (int k = 0; k < 20; ++k) {
        QuantumState s = QuantumState::from_ket(kron(g.ket(2), g.ket(2)));
        EXPECT_NEAR(concurrence(s), 0.0, 1e-7);
    }
}

TEST(BellStates, OrthonormalAndMaximallyEntangled) {
    std::vector<Ket> b = {bell::phi_plus(), bell::phi_minus(), bell::psi_plus(), bell::psi_minus()};
    for (size_t i = 0; i < b.size(); ++i) {
        for (size_t j = 0; j < b.size(); ++j) {
            EXPECT_NEAR(std::abs(b[i].dot(b[j])), i == j ? 1.0 : 0.0, 1e-15);
        }
        EXPECT_NEAR(concurrence(QuantumState::from_ket(b[i])), 1.0, 1e-10);
    }
}

TEST(QuantumStateTest, FromDensityValidates) {
    Operator bad = Operator::Identity(2, 2);
    bad(0, 1) = 1.0;
    EXPECT_THROW(QuantumState::from_density(bad), ValidationError);
    Operator negative = Operator::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    EXPECT_THROW(QuantumState::from_density(negative), ValidationError);
    QuantumState s = QuantumState::from_density(2.0 * Operator::Identity(2, 2));
    EXPECT_NEAR(s.purity(), 0.5, 1e-15);
    EXPECT_EQ(s.num_qubits(), 1);
}

TEST(QuantumStateTest, PurityAndDominantKet) {
    Gen g(5);
    Ket psi = g.ket(8);
    QuantumState s = QuantumState::from_ket(psi);
    EXPECT_TRUE(s.is_pure());
    EXPECT_NEAR(std::abs(s.dominant_ket().dot(psi)), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(s, psi), 1.0, 1e-12);
}

TEST(Hadamard, MapsPlusToExcited) {
    Ket plus = (basis_ket("e") + basis_ket("g")) / std::sqrt(2.0);
    Ket out = hadamard_n(1) * plus;
    EXPECT_NEAR(std::abs(out(0)), 1.0, 1e-15);
    Operator h3 = hadamard_n(3);
    EXPECT_LT((h3 * h3 - Operator::Identity(8, 8)).norm(), 1e-14);
}

}  // namespace
}  // namespace ncqf
