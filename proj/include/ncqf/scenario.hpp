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

// Declarative scenario description (JSON round-trippable) and its
// materialized, ready-to-integrate form.

#ifndef NCQF_SCENARIO_HPP
#define NCQF_SCENARIO_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ncqf/feedback.hpp"
#include "ncqf/qmath.hpp"
#include "ncqf/trajectory.hpp"

namespace ncqf {

/// Linear combination of product operators, each given as a string over
/// I, X, Y, Z, '-', '+', 'e', 'g' (one character per qubit).
struct OperatorSpec {
    struct Term {
        cplx coeff{1.0, 0.0};
        std::string ops;
    };
    std::vector<Term> terms;

    bool empty() const { return terms.empty(); }
    Operator build(int num_qubits) const;

    static OperatorSpec single(std::string ops, cplx coeff = 1.0);
    OperatorSpec &add(std::string ops, cplx coeff = 1.0);
    OperatorSpec scaled(cplx factor) const;
};

struct ChannelSpec {
    std::string label;
    OperatorSpec op;
    double eta = 1.0;
};

/// kind = "basis" (bits), "plus" (|+>^n), "bloch" (one Bloch vector per
/// qubit, product state), "magic" (eps, five qubits), "named" (name).
struct InitialStateSpec {
    std::string kind = "plus";
    std::string bits;
    std::vector<std::array<double, 3>> bloch;
    double eps = 0.0;
    std::string name;
};

/// kind = "none", "fixed" (omega), "basic", "eigenbasis" (omega_max,
/// rank_tol, degeneracy_tol, support_phase), "restricted" (thetas, mode),
/// "population" (target, omega_psi).
struct FeedbackSpec {
    std::string kind = "none";
    OperatorSpec omega;
    std::vector<OperatorSpec> thetas;
    std::string mode = "scalar";
    double omega_max = 50.0;
    double rank_tol = 1e-10;
    double degeneracy_tol = 1e-9;
    double support_phase = 0.0;
    std::string target;
    double omega_psi = 0.0;
};

/// Switches the open-loop Hamiltonian to `omega` the first time `observable`
/// exceeds `threshold`.
struct TriggerSpec {
    std::string observable;
    double threshold = 0.0;
    OperatorSpec omega;
};

/// A trajectory succeeds when the terminal value of `observable` exceeds
/// `threshold`.
struct PostselectSpec {
    std::string observable;
    double threshold = 0.0;
};

struct ScenarioConfig {
    std::string name;
    std::string description;
    int qubits = 1;
    double duration = 1.0;
    double dt = 1e-3;
    Integrator integrator = Integrator::kraus;
    std::vector<ChannelSpec> channels;
    /// One entry per channel.
    std::vector<FeedbackSpec> feedback;
    InitialStateSpec initial;
    OperatorSpec omega;
    std::optional<TriggerSpec> trigger;
    std::vector<std::string> observables;
    std::optional<PostselectSpec> postselect;
    int observable_stride = 1;
    bool track_spectrum = false;

    long long num_steps() const;
};

nlohmann::json to_json(const ScenarioConfig &config);
/// Throws ValidationError naming the offending field path.
ScenarioConfig scenario_from_json(const nlohmann::json &j);
void validate(const ScenarioConfig &config);

/// Named kets usable by observables and population targets: Bell states
/// (Phi+, Phi-, Psi+, Psi-), basis labels over {e,g}, ghz_full, ghz_half,
/// F1L, F0L.
Ket named_ket(const std::string &name, int num_qubits);

struct ObservableContext {
    const std::vector<MeasurementChannel> *channels = nullptr;
    const std::vector<FeedbackLaw> *laws = nullptr;
};

struct Observable {
    std::string name;
    std::function<double(const QuantumState &)> eval;
};

/// Names: concurrence, purity, lambda_max, bell_max, fid:<ket>,
/// fid_h:<ket> (after a Hadamard on every qubit), expect:<pauli string>,
/// signal:<label>, variance:<label>, noise:<label>, bloch_x, bloch_y,
/// bloch_z, bloch_r, stab_sum, code_weight, eps_out.
Observable make_observable(const std::string &name, int num_qubits, const ObservableContext &ctx);

/// Materialized scenario: operators built, observables resolved. Immutable
/// and shareable across threads.
struct Scenario {
    ScenarioConfig config;
    std::vector<MeasurementChannel> channels;
    std::vector<FeedbackLaw> laws;
    QuantumState initial;
    Operator omega;
    std::optional<Observable> trigger_observable;
    Operator trigger_omega;
    std::vector<Observable> observables;
    std::optional<Observable> postselect_observable;
};

Scenario materialize(const ScenarioConfig &config);
QuantumState build_initial_state(const InitialStateSpec &spec, int num_qubits);
FeedbackLaw build_feedback(const FeedbackSpec &spec, int num_qubits);

}  // namespace ncqf

#endif
