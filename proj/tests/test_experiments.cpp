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
#include <set>

#include "ncqf/errors.hpp"
#include "ncqf/experiments.hpp"
#include "ncqf/magic.hpp"
#include "ncqf/simulate.hpp"

namespace ncqf {
namespace {

namespace ex = experiments;

double first_time_above(const TrajectoryRecord &r, const std::string &name, double level) {
    const auto &s = r.series(name);
    for (size_t k = 0; k < s.size(); ++k)
        if (s[k] >= level) return r.times[k];
    return INFINITY;
}

TEST(Presets, NamesAreUniqueAndValid) {
    std::set<std::string> names;
    for (const auto &p : ex::presets()) {
        EXPECT_TRUE(names.insert(p.name).second) << p.name;
        EXPECT_FALSE(p.description.empty());
        EXPECT_NO_THROW(validate(p.config));
        EXPECT_NO_THROW(materialize(p.config));
        EXPECT_EQ(p.config.name, p.name);
    }
    EXPECT_EQ(names.size(), 12u);
    EXPECT_THROW(ex::preset("no_such_preset"), ValidationError);
}

TEST(HalfParity, BasicFeedbackPreparesBellState) {
    TrajectoryRecord r = simulate_trajectory(ex::preset("half_parity"), 1);
    EXPECT_GE(r.terminal("concurrence"), 0.999);
    EXPECT_GE(r.terminal("fid:Psi+"), 0.999);
    EXPECT_LE(r.terminal("variance:hp"), 1e-3);
}

TEST(HalfParity, LocalOptimalLawIsNoSlower) {
    TrajectoryRecord basic = simulate_trajectory(ex::preset("half_parity"), 2);
    TrajectoryRecord local = simulate_trajectory(ex::preset("half_parity_local_optimal"), 2);
    double tb = first_time_above(basic, "concurrence", 0.999);
    double tl = first_time_above(local, "concurrence", 0.999);
    ASSERT_TRUE(std::isfinite(tl));
    EXPECT_LE(tl, tb);
}

TEST(HalfParity, WithoutFeedbackOutcomeIsRandom) {
    ScenarioConfig c = ex::half_parity(ex::HalfParityFeedback::none, 1.0, 3.0);
    std::set<long> outcomes;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        TrajectoryRecord r = simulate_trajectory(c, seed);
        outcomes.insert(std::lround(r.terminal("fid:Psi+") * 10));
    }
    EXPECT_GT(outcomes.size(), 1u);
}

// At f = 1/R the x-rotation rate of the feedback w = f sqrt(G) sigma_y
// maximizes dR/dt.
TEST(Purification, OptimalFeedbackStrength) {
    const double gamma = 1.3;
    MeasurementChannel z{"z", std::sqrt(gamma) * ops::sigma_z(), 1.0};
    std::vector<MeasurementChannel> chs = {z};
    for (double r : {0.3, 0.6, 0.9}) {
        QuantumState rho(Operator((Operator::Identity(2, 2) + r * ops::sigma_x()) / 2.0));
        auto rate = [&](double f) {
            std::vector<Operator> ws = {f * std::sqrt(gamma) * ops::sigma_y()};
            Operator d = nc_drift(rho, chs, ws, Operator::Zero(2, 2));
            return expect(d, ops::sigma_x()).real();
        };
        double f = 1 / r, h = 1e-4;
        EXPECT_NEAR((rate(f + h) - rate(f - h)) / (2 * h), 0.0, 1e-6);
        EXPECT_LT(rate(f + 0.3), rate(f));
        EXPECT_NEAR(rate(f), 2 * gamma * (1 - r * r) / r, 1e-12);
    }
}

TEST(Purification, ClosedFormRadius) {
    EXPECT_DOUBLE_EQ(ex::purification_radius(0.5, 1.0, 0.0), 0.5);
    EXPECT_NEAR(ex::purification_radius(0.5, 1.0, 20.0), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ex::purification_radius(1.0, 1.0, 0.7), 1.0);
    // dR/dt = 2 G (1 - R^2) / R.
    double g = 0.8, t = 0.3, h = 1e-6;
    double r = ex::purification_radius(0.4, g, t);
    double drdt = (ex::purification_radius(0.4, g, t + h) - ex::purification_radius(0.4, g, t - h)) / (2 * h);
    EXPECT_NEAR(drdt, 2 * g * (1 - r * r) / r, 1e-6);
}

TEST(Purification, PureStartStaysPure) {
    ScenarioConfig c = ex::purification(true, 1.0, 1.0, 0.2, 1e-4);
    TrajectoryRecord r = simulate_trajectory(c, 1);
    for (double v : r.series("bloch_r")) EXPECT_NEAR(v, 1.0, 1e-9);
    for (double v : r.series("bloch_z")) EXPECT_NEAR(v, 0.0, 1e-9);
    EXPECT_THROW(ex::purification(true, 0.0), ValidationError);
}

TEST(Purification, ZeroRateFreezesTheState) {
    ScenarioConfig c = ex::purification(true, 0.5, 0.0, 0.1, 1e-4);
    TrajectoryRecord r = simulate_trajectory(c, 1);
    for (double v : r.series("bloch_x")) EXPECT_NEAR(v, 0.5, 1e-12);
}

TEST(Purification, ShortRunFollowsClosedForm) {
    ScenarioConfig c = ex::purification(true, 0.5, 1.0, 0.2, 1e-5);
    TrajectoryRecord r = simulate_trajectory(c, 8);
    const auto &rad = r.series("bloch_r");
    const auto &z = r.series("bloch_z");
    for (size_t k = 0; k < r.rows(); ++k) {
        EXPECT_NEAR(rad[k], ex::purification_radius(0.5, 1.0, r.times[k]), 1e-4);
        EXPECT_LE(std::abs(z[k]), 1e-6);
    }
}

TEST(Ghz, InitialOverlapsAndShortRun) {
    ScenarioConfig c = ex::ghz(ex::Parity::full, 1.0, 0.5);
    TrajectoryRecord r = simulate_trajectory(c, 1);
    EXPECT_NEAR(r.series("fid_h:ghz_full").front(), 0.5, 1e-14);
    for (double s : r.series("signal:I")) EXPECT_LE(std::abs(s), 1e-6);
    ScenarioConfig h = ex::ghz(ex::Parity::half, 1.0, 0.0);
    EXPECT_NEAR(simulate_trajectory(h, 1).terminal("fid_h:ghz_half"), 0.375, 1e-14);
}

TEST(Msd, GridAndConfig) {
    std::vector<double> g = ex::msd_grid();
    ASSERT_EQ(g.size(), 8u);
    EXPECT_DOUBLE_EQ(g.front(), 0.0);
    EXPECT_NEAR(g.back(), 0.28, 1e-15);
    ex::MsdParams p;
    p.eps_in = 0.1;
    ScenarioConfig c = ex::msd(p);
    EXPECT_EQ(c.qubits, 5);
    EXPECT_EQ(c.channels.size(), 4u);
    ASSERT_TRUE(c.postselect.has_value());
    EXPECT_EQ(c.postselect->threshold, 3.9);
    p.eps_in = 1.5;
    EXPECT_THROW(ex::msd(p), ValidationError);
}

TEST(Msd, PointSummary) {
    ex::MsdParams p;
    p.eps_in = 0.0;
    p.feedback_on = false;
    p.t_final = 0.5;
    ex::MsdPoint pt = ex::msd_run(p, 24, 3, 0);
    EXPECT_EQ(pt.n_traj, 24);
    EXPECT_NEAR(pt.success_fraction, double(pt.successes) / 24, 1e-15);
    EXPECT_NEAR(pt.success_stderr, std::sqrt(pt.success_fraction * (1 - pt.success_fraction) / 24), 1e-15);
    EXPECT_EQ(pt.ps_analytic, msd::ps_analytic(0.0));
    EXPECT_LE(pt.n_selected, pt.successes);
    EXPECT_EQ(pt.n_selected, std::min<long long>(std::llround(24 * pt.ps_analytic), pt.successes));
    EXPECT_EQ(pt.selected_eps_out.count, pt.n_selected);
    // Zero input error gives zero output error on every success.
    if (pt.successes > 0) EXPECT_NEAR(pt.eps_out.p84, 0.0, 1e-6);
}

}  // namespace
}  // namespace ncqf
