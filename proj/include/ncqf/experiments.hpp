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

// Built-in scenarios and the MSD sweep helpers.

#ifndef NCQF_EXPERIMENTS_HPP
#define NCQF_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ncqf/ensemble.hpp"
#include "ncqf/scenario.hpp"

namespace ncqf::experiments {

enum class HalfParityFeedback { basic, local_optimal, none };

/// Two qubits under L = sqrt(gamma) (ZI + IZ) from |++>.
ScenarioConfig half_parity(HalfParityFeedback feedback = HalfParityFeedback::basic, double gamma = 1.0,
                           double duration = 10.0, double dt = 1e-3);

/// Two qubits under the joint fluorescence channels from |ee>. With
/// `stabilize`, Omega = 20 gamma (YI + IY) switches on once the best Bell
/// fidelity exceeds 0.999.
ScenarioConfig fluorescence(bool stabilize = false, bool feedback = true, double gamma = 1.0,
                            double duration = 10.0, double dt = 1e-3);

enum class Parity { half, full };

/// Four qubits under in-phase and quadrature combinations of two-qubit
/// half- or full-parity couplings, basic feedback on both channels.
ScenarioConfig ghz(Parity parity, double gamma = 1.0, double duration = 10.0, double dt = 1e-3);

/// One qubit under L = sqrt(gamma) Z from Bloch vector (r0, 0, 0).
ScenarioConfig purification(bool feedback = true, double r0 = 0.5, double gamma = 1.0, double duration = 1.5,
                            double dt = 1e-5);

/// R(t) = sqrt(1 - (1 - r0^2) exp(-4 gamma t)), the noise-canceled
/// Bloch radius.
double purification_radius(double r0, double gamma, double t);

struct MsdParams {
    double eps_in = 0.0;
    bool feedback_on = true;
    double t_final = 5.0;
    double success_threshold = 3.9;
    double gamma = 1.0;
    double dt = 1e-3;
    double omega_max = 50.0;
    double degeneracy_tol = 2e-2;
};

/// Five qubits, four stabilizer channels L_j = sqrt(gamma) S_j, input
/// rho(eps_in)^(x5).
ScenarioConfig msd(const MsdParams &params);

struct MsdPoint {
    double eps_in = 0.0;
    long long n_traj = 0;
    long long successes = 0;
    double success_fraction = 0.0;
    /// Binomial standard error of success_fraction.
    double success_stderr = 0.0;
    double ps_analytic = 0.0;
    double eps_out_analytic = 0.0;
    /// Over all postselected trajectories.
    Stats eps_out;
    /// round(n_traj * ps_analytic), capped by the number of successes.
    long long n_selected = 0;
    /// Over the n_selected postselected trajectories with the lowest eps_out.
    Stats selected_eps_out;
};

/// Summarizes an MSD ensemble whose observables include eps_out.
MsdPoint msd_point(const EnsembleSummary &summary, double eps_in);

MsdPoint msd_run(const MsdParams &params, long long n_traj, std::uint64_t seed, int workers = 1);

/// The eps_in grid 0, 0.04, ..., 0.28.
std::vector<double> msd_grid();

struct Preset {
    std::string name;
    std::string description;
    ScenarioConfig config;
};

/// Stable order.
std::vector<Preset> presets();
/// Throws ValidationError for unknown names.
ScenarioConfig preset(const std::string &name);

}  // namespace ncqf::experiments

#endif
