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

#include <algorithm>
#include <cmath>

#include "gen.hpp"
#include "ncqf/experiments.hpp"
#include "ncqf/nhh.hpp"
#include "ncqf/simulate.hpp"

namespace ncqf {
namespace {

using testing::Gen;

MeasurementChannel hp_channel() { return {"hp", pauli_string("ZI") + pauli_string("IZ"), 1.0}; }

TEST(BuildHnc, MatchesNoiseOperatorForm) {
    Gen g(41);
    for (int k = 0; k < 50; ++k) {
        int dim = 1 << g.integer(1, 3);
        QuantumState psi = g.pure_state(dim);
        std::vector<MeasurementChannel> chs = {g.channel(dim), g.channel(dim)};
        std::vector<Operator> ws = {g.hermitian(dim), basic_ncqf(psi, chs[1])};
        Operator omega = g.hermitian(dim);
        Operator a = build_hnc(psi, chs, ws, omega);
        Operator b = build_hnc_xi(psi, chs, ws, omega);
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(BuildHnc, EigenstateOfHermitianChannelHasZeroRate) {
    QuantumState ee = QuantumState::from_ket(basis_ket("ee"));
    std::vector<MeasurementChannel> chs = {hp_channel()};
    std::vector<Operator> ws = {Operator::Zero(4, 4)};
    Operator h = build_hnc(ee, chs, ws, Operator());
    Ket v = basis_ket("ee");
    EXPECT_LT(std::abs(-kI * v.dot(h * v)), 1e-14);
}

TEST(NoiseOperator, EigenRelationUnderCancellation) {
    Gen g(42);
    for (int k = 0; k < 20; ++k) {
        QuantumState psi = g.pure_state(4);
        MeasurementChannel ch = g.channel(4);
        Operator w = basic_ncqf(psi, ch);
        Ket v = psi.dominant_ket();
        double s = signal(psi, ch);
        // The basic law carries no free omega_psi term.
        Ket r = noise_operator(ch, w) * v - 0.5 * s * v;
        EXPECT_LT(r.norm(), 1e-10);
        double shift = g.normal();
        Ket r2 = noise_operator(ch, w + shift * projector(v)) * v - (0.5 * s - kI * shift) * v;
        EXPECT_LT(r2.norm(), 1e-10);
    }
}

TEST(NhhSpectrum, TraceIdentityAndPhaseConvention) {
    Gen g(43);
    for (int k = 0; k < 20; ++k) {
        Operator h = g.gaussian(4);
        NhhSpectrum sp = nhh_spectrum(h);
        EXPECT_LT(std::abs(sp.values.sum() - (-kI * h.trace())), 1e-9);
        for (int c = 0; c < 4; ++c) {
            EXPECT_NEAR(sp.vectors.col(c).norm(), 1.0, 1e-12);
            Eigen::Index big;
            sp.vectors.col(c).cwiseAbs().maxCoeff(&big);
            EXPECT_NEAR(sp.vectors(big, c).imag(), 0.0, 1e-12);
            EXPECT_GT(sp.vectors(big, c).real(), 0.0);
            Ket res = -kI * h * sp.vectors.col(c) - sp.values(c) * sp.vectors.col(c);
            EXPECT_LT(res.norm(), 1e-10);
        }
        EXPECT_FALSE(sp.exceptional);
    }
}

TEST(NhhSpectrum, JordanBlockIsFlagged) {
    Operator h = Operator::Zero(2, 2);
    h(0, 1) = 1.0;
    EXPECT_TRUE(nhh_spectrum(h).exceptional);
}

TEST(SpectrumTracker, ConstantSeriesKeepsBranches) {
    Gen g(44);
    Operator h = g.gaussian(4);
    SpectrumTracker tracker;
    for (int k = 0; k < 5; ++k) tracker.push(k * 0.1, h);
    const auto &s = tracker.samples();
    ASSERT_EQ(s.size(), 5u);
    for (const auto &sample : s) {
        EXPECT_EQ(sample.branch, s.front().branch);
        for (size_t i = 0; i < 4; ++i) EXPECT_LT(std::abs(sample.values[i] - s.front().values[i]), 1e-12);
    }
}

// Two real eigenvalues that cross keep their branch labels through the crossing.
TEST(SpectrumTracker, FollowsCrossingBranches) {
    std::vector<double> times;
    std::vector<Operator> hs;
    for (int k = 0; k <= 20; ++k) {
        double t = k * 0.1;
        Operator h = Operator::Zero(2, 2);
        h(0, 0) = kI * (1.0 - t);
        h(1, 1) = kI * (t - 1.0) * 0.5;
        times.push_back(t);
        hs.push_back(h);
    }
    auto samples = spectrum_track(times, hs);
    auto branch_value = [](const SpectrumSample &s, int b) {
        for (size_t i = 0; i < s.branch.size(); ++i)
            if (s.branch[i] == b) return s.values[i];
        return cplx(NAN, NAN);
    };
    int b0 = samples.front().branch[0];
    EXPECT_NEAR(branch_value(samples.front(), b0).real(), 1.0, 1e-12);
    EXPECT_NEAR(branch_value(samples.back(), b0).real(), -1.0, 1e-12);
    for (const auto &s : samples) {
        std::vector<int> sorted = s.branch;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(sorted, (std::vector<int>{0, 1}));
        EXPECT_GE(s.values[0].real(), s.values[1].real());
    }
}

TEST(SpectrumTracker, BranchesArePermutations) {
    Gen g(45);
    SpectrumTracker tracker;
    Operator h = g.gaussian(4);
    for (int k = 0; k < 30; ++k) {
        h += 0.05 * g.gaussian(4);
        tracker.push(k, h);
    }
    for (const auto &s : tracker.samples()) {
        std::vector<int> sorted = s.branch;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3}));
    }
}

TEST(HalfParitySpectrum, TerminalRatesAreZeroAndMinusTwoGamma) {
    for (double gamma : {1.0, 2.0}) {
        ScenarioConfig c = experiments::half_parity(experiments::HalfParityFeedback::basic, gamma, 10.0 / gamma);
        TrajectoryRecord rec = simulate_trajectory(c, 7);
        ASSERT_FALSE(rec.spectrum.empty());
        std::vector<cplx> v = rec.spectrum.back().values;
        std::vector<double> expected = {0.0, 0.0, -2 * gamma, -2 * gamma};
        for (size_t i = 0; i < 4; ++i) {
            EXPECT_NEAR(v[i].real(), expected[i], 1e-2 * gamma);
            EXPECT_NEAR(v[i].imag(), 0.0, 1e-2 * gamma);
        }
    }
}

// The noise-canceled trajectory follows d|psi>/dt = -i H_NC |psi>.
TEST(HalfParitySpectrum, TrajectoryFollowsEffectiveSchrodingerEquation) {
    ScenarioConfig c = experiments::half_parity(experiments::HalfParityFeedback::basic, 1.0, 2.0, 1e-3);
    c.observable_stride = 1;
    SimulationOptions opts;
    opts.snapshot_stride = 100;
    TrajectoryRecord rec = simulate_trajectory(c, 3, opts);

    std::vector<MeasurementChannel> chs = {hp_channel()};
    auto deriv = [&](const Ket &psi) {
        QuantumState s = QuantumState::from_ket(psi);
        std::vector<Operator> ws = {basic_ncqf(s, chs[0])};
        return Ket(-kI * build_hnc(s, chs, ws, Operator()) * psi);
    };
    Ket plus = (basis_ket("e") + basis_ket("g")) / std::sqrt(2.0);
    Ket psi = kron(plus, plus);
    const double h = 1e-3;
    for (size_t k = 0; k < rec.snapshots.size(); ++k) {
        Ket ref = QuantumState(rec.snapshots[k]).dominant_ket();
        EXPECT_GT(std::abs(ref.dot(psi)), 1.0 - 1e-3) << "snapshot " << k;
        for (int j = 0; j < 100 && k + 1 < rec.snapshots.size(); ++j) {
            Ket k1 = deriv(psi);
            Ket k2 = deriv((psi + 0.5 * h * k1).normalized());
            Ket k3 = deriv((psi + 0.5 * h * k2).normalized());
            Ket k4 = deriv((psi + h * k3).normalized());
            psi = (psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)).normalized();
        }
    }
}

}  // namespace
}  // namespace ncqf
