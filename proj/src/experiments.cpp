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

#include "ncqf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ncqf/errors.hpp"
#include "ncqf/magic.hpp"

namespace ncqf::experiments {

namespace {

FeedbackSpec basic() {
    FeedbackSpec f;
    f.kind = "basic";
    return f;
}

FeedbackSpec none() {
    return FeedbackSpec{};
}

FeedbackSpec restricted(OperatorSpec theta) {
    FeedbackSpec f;
    f.kind = "restricted";
    f.mode = "scalar";
    f.thetas.push_back(std::move(theta));
    return f;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

}  // namespace

ScenarioConfig half_parity(HalfParityFeedback feedback, double gamma, double duration, double dt) {
    ScenarioConfig c;
    c.name = "half_parity";
    c.description = "two qubits, half-parity measurement";
    c.qubits = 2;
    c.duration = duration;
    c.dt = dt;
    const double g = std::sqrt(gamma);
    c.channels.push_back({"hp", OperatorSpec::single("ZI", g).add("IZ", g), 1.0});
    switch (feedback) {
        case HalfParityFeedback::basic:
            c.feedback.push_back(basic());
            c.track_spectrum = true;
            break;
        case HalfParityFeedback::local_optimal:
            c.name = "half_parity_local_optimal";
            c.feedback.push_back(restricted(OperatorSpec::single("YI").add("IY")));
            c.integrator = Integrator::ito_euler;
            break;
        case HalfParityFeedback::none:
            c.name = "half_parity_nofb";
            c.feedback.push_back(none());
            break;
    }
    c.initial.kind = "plus";
    c.observables = {"fid:Phi+", "fid:Phi-", "fid:Psi+", "fid:Psi-", "concurrence", "purity", "variance:hp"};
    return c;
}

ScenarioConfig fluorescence(bool stabilize, bool feedback, double gamma, double duration, double dt) {
    ScenarioConfig c;
    c.name = stabilize ? "fluorescence_stabilized" : (feedback ? "fluorescence" : "fluorescence_nofb");
    c.description = "two qubits, joint fluorescence measurement";
    c.qubits = 2;
    c.duration = duration;
    c.dt = dt;
    const double a = std::sqrt(gamma / 2.0);
    c.channels.push_back({"f1", OperatorSpec::single("-I", a).add("I-", a), 1.0});
    c.channels.push_back({"f2", OperatorSpec::single("I-", kI * a).add("-I", -kI * a), 1.0});
    c.feedback = {feedback ? basic() : none(), feedback ? basic() : none()};
    c.initial.kind = "basis";
    c.initial.bits = "ee";
    c.observables = {"fid:Phi+", "fid:Phi-", "fid:Psi+", "fid:Psi-", "bell_max", "fid:gg", "concurrence", "purity"};
    if (stabilize) {
        TriggerSpec t;
        t.observable = "bell_max";
        t.threshold = 0.999;
        t.omega = OperatorSpec::single("YI", 20.0 * gamma).add("IY", 20.0 * gamma);
        c.trigger = t;
    }
    return c;
}

ScenarioConfig ghz(Parity parity, double gamma, double duration, double dt) {
    ScenarioConfig c;
    c.qubits = 4;
    c.duration = duration;
    c.dt = dt;
    const double a = std::sqrt(gamma / 2.0);
    OperatorSpec in_phase;
    OperatorSpec quadrature;
    if (parity == Parity::full) {
        c.name = "ghz_full";
        c.description = "four qubits, paired full-parity measurement";
        in_phase = OperatorSpec::single("ZZII", a).add("IIZZ", a);
        quadrature = OperatorSpec::single("ZZII", kI * a).add("IIZZ", -kI * a);
        c.observables = {"fid_h:ghz_full"};
    } else {
        c.name = "ghz_half";
        c.description = "four qubits, paired half-parity measurement";
        in_phase = OperatorSpec::single("ZIII", a).add("IZII", a).add("IIZI", a).add("IIIZ", a);
        quadrature = OperatorSpec::single("ZIII", kI * a).add("IZII", kI * a).add("IIZI", -kI * a).add("IIIZ", -kI * a);
        c.observables = {"fid_h:ghz_half"};
    }
    c.channels.push_back({"I", in_phase, 1.0});
    c.channels.push_back({"Q", quadrature, 1.0});
    c.feedback = {basic(), basic()};
    c.integrator = Integrator::ito_euler;
    c.initial.kind = "plus";
    c.observables.insert(c.observables.end(), {"signal:I", "signal:Q", "purity"});
    return c;
}

ScenarioConfig purification(bool feedback, double r0, double gamma, double duration, double dt) {
    if (!(r0 > 0.0 && r0 <= 1.0)) {
        throw ValidationError("r0", "must lie in (0, 1]");
    }
    ScenarioConfig c;
    c.name = feedback ? "purification" : "purification_nofb";
    c.description = "one qubit, dephasing measurement";
    c.qubits = 1;
    c.duration = duration;
    c.dt = dt;
    c.channels.push_back({"z", OperatorSpec::single("Z", std::sqrt(gamma)), 1.0});
    if (feedback) {
        FeedbackSpec f;
        f.kind = "eigenbasis";
        f.omega_max = 50.0 * std::sqrt(gamma);
        c.feedback.push_back(f);
        c.integrator = Integrator::ito_euler;
    } else {
        c.feedback.push_back(none());
    }
    c.initial.kind = "bloch";
    c.initial.bloch = {{r0, 0.0, 0.0}};
    c.observables = {"bloch_x", "bloch_y", "bloch_z", "bloch_r", "purity"};
    c.observable_stride = std::max(1, static_cast<int>(std::lround(1e-3 / dt)));
    return c;
}

double purification_radius(double r0, double gamma, double t) {
    return std::sqrt(1.0 - (1.0 - r0 * r0) * std::exp(-4.0 * gamma * t));
}

ScenarioConfig msd(const MsdParams &p) {
    if (!(p.eps_in >= 0.0 && p.eps_in <= 0.5)) {
        throw ValidationError("eps_in", "must lie in [0, 0.5]");
    }
    if (!(p.success_threshold >= 0.0 && p.success_threshold <= 4.0)) {
        throw ValidationError("success_threshold", "must lie in [0, 4]");
    }
    ScenarioConfig c;
    c.name = p.feedback_on ? "msd" : "msd_nofb";
    c.description = "five-qubit magic state distillation, eps_in = " + fmt(p.eps_in);
    c.qubits = 5;
    c.duration = p.t_final;
    c.dt = p.dt;
    const double g = std::sqrt(p.gamma);
    for (const auto &s : msd::stabilizers()) {
        c.channels.push_back({s, OperatorSpec::single(s, g), 1.0});
        if (p.feedback_on) {
            FeedbackSpec f;
            f.kind = "eigenbasis";
            f.omega_max = p.omega_max * g;
            f.degeneracy_tol = p.degeneracy_tol;
            c.feedback.push_back(f);
        } else {
            c.feedback.push_back(none());
        }
    }
    c.initial.kind = "magic";
    c.initial.eps = p.eps_in;
    c.observables = {"stab_sum", "fid:F1L", "eps_out", "code_weight", "lambda_max", "purity"};
    c.observable_stride = std::max(1, static_cast<int>(std::lround(0.05 / p.dt)));
    c.postselect = PostselectSpec{"stab_sum", p.success_threshold};
    return c;
}

MsdPoint msd_point(const EnsembleSummary &summary, double eps_in) {
    MsdPoint pt;
    pt.eps_in = eps_in;
    pt.n_traj = summary.n_traj;
    pt.successes = summary.successes;
    pt.success_fraction = summary.success_fraction();
    pt.success_stderr = std::sqrt(pt.success_fraction * (1.0 - pt.success_fraction) / static_cast<double>(pt.n_traj));
    pt.ps_analytic = msd::ps_analytic(eps_in);
    pt.eps_out_analytic = msd::eps_out_analytic(eps_in);
    std::vector<double> eo = summary.terminal_values("eps_out", true);
    pt.eps_out = describe(eo);
    std::sort(eo.begin(), eo.end());
    long long want = std::llround(static_cast<double>(pt.n_traj) * pt.ps_analytic);
    pt.n_selected = std::min<long long>(want, static_cast<long long>(eo.size()));
    eo.resize(static_cast<size_t>(pt.n_selected));
    pt.selected_eps_out = describe(eo);
    return pt;
}

MsdPoint msd_run(const MsdParams &params, long long n_traj, std::uint64_t seed, int workers) {
    EnsembleOptions opts;
    opts.workers = workers;
    return msd_point(run_ensemble(msd(params), n_traj, seed, opts), params.eps_in);
}

std::vector<double> msd_grid() {
    return {0.0, 0.04, 0.08, 0.12, 0.16, 0.20, 0.24, 0.28};
}

std::vector<Preset> presets() {
    std::vector<Preset> out;
    auto add = [&](ScenarioConfig c, std::string description) {
        c.description = description;
        out.push_back({c.name, std::move(description), std::move(c)});
    };
    add(half_parity(HalfParityFeedback::basic),
        "half-parity Bell preparation with basic feedback; figure: Bell populations and concurrence vs time, "
        "plus the -iH_NC eigenvalue flow");
    add(half_parity(HalfParityFeedback::local_optimal),
        "half-parity Bell preparation with the locally optimal (YI+IY) law; figure: dashed comparison curves "
        "against the basic law");
    add(half_parity(HalfParityFeedback::none), "half-parity monitoring without feedback; stochastic control case");
    add(fluorescence(false),
        "joint fluorescence with basic feedback; figure: transient Bell state then relaxation to |gg>, and the "
        "-iH_NC eigenvalue flow");
    {
        ScenarioConfig c = fluorescence(false);
        c.name = "fluorescence_local_optimal";
        c.feedback = {restricted(OperatorSpec::single("YI").add("IY")),
                      restricted(OperatorSpec::single("XI").add("IX", -1.0))};
        add(c, "joint fluorescence with the locally optimal local-rotation laws; figure: dashed comparison curves");
    }
    add(fluorescence(true),
        "joint fluorescence with basic feedback and a fast YI+IY drive switched on at the Bell state; figure: "
        "concurrence trapped near 1");
    add(ghz(Parity::half),
        "four-qubit paired half-parity monitoring; figure: final state after a global Hadamard, the symmetric "
        "superposition with amplitudes sqrt(3/8) and 1/sqrt(24)");
    add(ghz(Parity::full),
        "four-qubit paired full-parity monitoring; figure: GHZ state (|eeee> - |gggg>)/sqrt(2) after a global "
        "Hadamard");
    add(purification(true),
        "rapid purification of a dephased qubit with the eigenbasis law; figure: deterministic Bloch-radius growth");
    add(purification(false), "dephased qubit under the same measurement without feedback; purity comparison");
    {
        MsdParams p;
        p.eps_in = 0.12;
        add(msd(p),
            "five-qubit magic state distillation with eigenbasis feedback at eps_in = 0.12; figure: histograms "
            "of final fidelity and stabilizer sum, success probability and eps_out sweeps");
        p.feedback_on = false;
        add(msd(p), "five-qubit magic state distillation without feedback at eps_in = 0.12; histogram baseline");
    }
    return out;
}

ScenarioConfig preset(const std::string &name) {
    for (auto &p : presets()) {
        if (p.name == name) {
            return p.config;
        }
    }
    throw ValidationError("preset", "unknown preset '" + name + "'");
}

}  // namespace ncqf::experiments
