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

#ifndef NCQF_TRAJECTORY_HPP
#define NCQF_TRAJECTORY_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncqf/feedback.hpp"
#include "ncqf/qmath.hpp"

namespace ncqf {

enum class Integrator {
    /// Kraus map per channel, then the feedback unitary.
    kraus,
    /// Euler-Maruyama on the feedback master equation, with the drift taken
    /// through drift_map.
    ito_euler,
};

std::string integrator_name(Integrator integrator);
Integrator parse_integrator(const std::string &name);

struct ControlInputs {
    /// Open-loop Hamiltonian; empty means zero.
    Operator omega;
    /// One law per channel.
    std::vector<FeedbackLaw> feedback;
};

struct StepOptions {
    Integrator integrator = Integrator::kraus;
    /// Abort when positivity repair removes more trace than this.
    double clip_mass_limit = 1e-6;
    /// Fill StepResult::omegas.
    bool keep_omegas = false;
};

struct StepResult {
    QuantumState state;
    /// Readout rates r_c, with r_c dt = sqrt(eta) s_c dt + dW_c.
    std::vector<double> readouts;
    std::vector<double> signals;
    std::vector<Operator> omegas;
    double clipped_mass = 0.0;
    bool capped = false;
    bool degenerate = false;
};

/// M0 = 1 + (sqrt(eta) r L - L^dag L / 2) dt and M1 = sqrt((1 - eta) dt) L.
std::pair<Operator, Operator> kraus_pair(const MeasurementChannel &channel, double readout, double dt);

/// Completely positive form of the feedback drift over one step:
/// K rho K^dag + dt sum_c (Xi_c rho Xi_c^dag + (1 - eta_c) L_c rho L_c^dag), with
/// Xi_c = sqrt(eta_c) L_c - i omega_c and
/// K = 1 - i H dt - (dt/2) sum_c (Xi_c^dag Xi_c + (1 - eta_c) L_c^dag L_c),
/// H = Omega + sum_c sqrt(eta_c) ((omega_c L_c + L_c^dag omega_c)/2 - s_c omega_c).
/// Equals rho + nc_drift dt up to O(dt^2).
Operator drift_map(const QuantumState &state, std::span<const MeasurementChannel> channels,
                   std::span<const Operator> omegas, const Operator &omega_open_loop, double dt);

/// Integrates one time step for a fixed set of channels. Reusable across
/// steps; holds per-channel precomputation only.
class Stepper {
   public:
    Stepper(std::vector<MeasurementChannel> channels, StepOptions options = {});

    const std::vector<MeasurementChannel> &channels() const { return channels_; }
    const StepOptions &options() const { return options_; }

    /// The returned state carries its eigendecomposition whenever a law
    /// needs it for the next step.
    StepResult step(const QuantumState &state, const ControlInputs &controls, double dt, std::span<const double> dw,
                    long long step_index = 0) const;

   private:
    struct Monomial {
        std::vector<int> col;
        std::vector<cplx> val;
    };
    struct Prepared {
        Operator x;
        Operator y;
        Operator ldl;
        bool y_zero = false;
        std::optional<Monomial> mono;
        std::optional<Monomial> x_mono;
        Eigen::VectorXd ldl_diag;
    };

    Operator apply_kraus(const Operator &rho, size_t c, double readout, double dt) const;
    Operator feedback_generator(const QuantumState &state, const ControlInputs &controls, double dt,
                                std::span<const double> dw, StepResult &result) const;
    StepResult repair(Operator rho, long long step_index, StepResult result, bool need_eig) const;

    std::vector<MeasurementChannel> channels_;
    std::vector<Prepared> prepared_;
    StepOptions options_;
};

/// One-shot convenience wrapper around Stepper.
StepResult step(const QuantumState &state, std::span<const MeasurementChannel> channels,
                const ControlInputs &controls, double dt, std::span<const double> dw, const StepOptions &options = {});

}  // namespace ncqf

#endif
