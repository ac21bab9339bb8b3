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

#include "ncqf/errors.hpp"
#include "ncqf/magic.hpp"

namespace ncqf {
namespace {

// Binomial weights of the five-qubit projection: the code space keeps the
// all-correct and all-wrong terms plus two- and three-error patterns.
double ps_oracle(double e) {
    double q = 1 - e;
    return (std::pow(e, 5) + 5 * e * e * std::pow(q, 3) + 5 * std::pow(e, 3) * q * q + std::pow(q, 5)) / 6;
}

double eps_out_oracle(double e) {
    double q = 1 - e;
    return (std::pow(e, 5) + 5 * e * e * std::pow(q, 3)) / (6 * ps_oracle(e));
}

Operator projector_oracle() {
    Operator p = Operator::Identity(32, 32);
    for (const char *s : {"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"}) p = p * (Operator::Identity(32, 32) + pauli_string(s)) / 2.0;
    return p;
}

TEST(MagicStates, BlochVectorsAlongBodyDiagonal) {
    QuantumState f0 = QuantumState::from_ket(msd::f0());
    double r = 1 / std::sqrt(3.0);
    EXPECT_NEAR(expect(f0.rho(), ops::sigma_x()).real(), r, 1e-14);
    EXPECT_NEAR(expect(f0.rho(), ops::sigma_y()).real(), r, 1e-14);
    EXPECT_NEAR(expect(f0.rho(), ops::sigma_z()).real(), r, 1e-14);
    EXPECT_NEAR(std::abs(msd::f0().dot(msd::f1())), 0.0, 1e-14);
    EXPECT_NEAR(msd::f1().norm(), 1.0, 1e-14);
}

TEST(MagicStates, CliffordHasMagicEigenvectors) {
    Operator t = msd::f_gate();
    EXPECT_LT((t.adjoint() * t - Operator::Identity(2, 2)).norm(), 1e-14);
    for (const Ket &v : {msd::f0(), msd::f1()}) {
        Ket tv = t * v;
        EXPECT_NEAR(std::abs(v.dot(tv)), 1.0, 1e-14);
    }
    // The twirl leaves the noisy input invariant.
    Operator rho = msd::noisy_input(0.1).rho();
    Operator t5 = kron({t, t, t, t, t});
    EXPECT_LT((t5 * rho * t5.adjoint() - rho).norm(), 1e-12);
}

TEST(Code, ProjectorAndStabilizers) {
    const Operator &p = msd::codespace_projector();
    EXPECT_LT((p - projector_oracle()).norm(), 1e-12);
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-12);
    EXPECT_LT((p * p - p).norm(), 1e-12);
    for (const auto &s : msd::stabilizers()) {
        Operator op = pauli_string(s);
        EXPECT_LT((op * p - p).norm(), 1e-12) << s;
    }
}

TEST(Code, LogicalStates) {
    const Ket &a = msd::logical_f1();
    const Ket &b = msd::logical_f0();
    EXPECT_NEAR(a.norm(), 1.0, 1e-12);
    EXPECT_NEAR(b.norm(), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(a.dot(b)), 0.0, 1e-12);
    EXPECT_NEAR(msd::stabilizer_sum(QuantumState::from_ket(a)), 4.0, 1e-12);
    msd::DecodeResult da = msd::decode(QuantumState::from_ket(a));
    EXPECT_NEAR(da.code_weight, 1.0, 1e-12);
    EXPECT_NEAR(da.eps_out, 0.0, 1e-12);
    EXPECT_NEAR(msd::decode(QuantumState::from_ket(b)).eps_out, 1.0, 1e-12);
}

TEST(Analytic, SuccessProbability) {
    EXPECT_EQ(msd::ps_analytic(0.0), 1.0 / 6.0);
    for (double e : {0.0, 0.01, 0.04, 0.12, 0.2, 0.28, 0.5, 1.0}) {
        EXPECT_NEAR(msd::ps_analytic(e), ps_oracle(e), 1e-15);
        EXPECT_NEAR(msd::eps_out_analytic(e), eps_out_oracle(e), 1e-14);
    }
    // Frozen reference values.
    EXPECT_NEAR(msd::ps_analytic(0.12), 0.097252266666666656, 1e-16);
    EXPECT_THROW(msd::ps_analytic(-0.1), ValidationError);
    EXPECT_THROW(msd::eps_out_analytic(1.5), ValidationError);
}

TEST(Analytic, FixedPointAndQuadraticSuppression) {
    double th = msd::threshold_analytic();
    EXPECT_NEAR(th, 0.5 * (1 - std::sqrt(3.0 / 7.0)), 1e-15);
    EXPECT_NEAR(msd::eps_out_analytic(th), th, 1e-12);
    EXPECT_LT(msd::eps_out_analytic(th - 0.01), th - 0.01);
    EXPECT_GT(msd::eps_out_analytic(th + 0.01), th + 0.01);
    double ratio = msd::eps_out_analytic(0.01) / (0.01 * 0.01);
    EXPECT_NEAR(ratio, 5.0, 0.15 * 5.0);
}

TEST(Decode, NoisyInputMatchesClosedForms) {
    for (double e : {0.0, 0.04, 0.12, 0.2}) {
        msd::DecodeResult d = msd::decode(msd::noisy_input(e));
        EXPECT_NEAR(d.code_weight, ps_oracle(e), 1e-12) << e;
        EXPECT_NEAR(d.eps_out, eps_out_oracle(e), 1e-12) << e;
        EXPECT_NEAR(d.rho_out.trace().real(), 1.0, 1e-12);
    }
    EXPECT_NEAR(msd::stabilizer_sum(msd::noisy_input(0.0)), 4.0 / 9.0, 1e-12);
}

}  // namespace
}  // namespace ncqf
