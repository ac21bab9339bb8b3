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

// Noise-canceling feedback synthesis.
//
// A channel measures L with efficiency eta; the readout is
//     r dt = sqrt(eta) <L + L^dag> dt + dW.
// Feedback applies exp(-i omega dW) right after each measurement, with omega
// chosen from the pre-measurement state. The stochastic part of the update is
// B = b_L[rho] + i[rho, omega]; the laws below choose omega to make it vanish
// (or make it as small as possible within a restricted family).

#ifndef NCQF_FEEDBACK_HPP
#define NCQF_FEEDBACK_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncqf/qmath.hpp"

namespace ncqf {

struct MeasurementChannel {
    std::string label;
    Operator L;
    double eta = 1.0;

    void validate(int dim) const;
};

/// s = <L + L^dag>.
double signal(const QuantumState &state, const MeasurementChannel &channel);

/// X = (L + L^dag)/2, Y = (L - L^dag)/2.
std::pair<Operator, Operator> split_xy(const Operator &L);

/// b_L[rho] = sqrt(eta) (L rho + rho L^dag - s rho).
Operator measurement_superop(const QuantumState &state, const MeasurementChannel &channel);

/// a_A[rho] = A rho A^dag - {A^dag A, rho}/2.
Operator dissipator(const Operator &rho, const Operator &a);

/// omega_0 = i([rho, X] - Y). Requires a pure state (eta = 1 form).
Operator basic_ncqf(const QuantumState &state, const MeasurementChannel &channel, double purity_tol = 1e-6);

/// B = b_L[rho] + i[rho, omega].
Operator noise_superop(const QuantumState &state, const MeasurementChannel &channel, const Operator &omega);

/// N = tr(B^dag B), split as N_a + N_b + N_c where N_a depends on omega
/// quadratically, N_b linearly and N_c not at all.
struct NoiseReport {
    double total = 0.0;
    double na = 0.0;
    double nb = 0.0;
    double nc = 0.0;

    bool cancelled(double tol = 1e-10) const { return total <= tol; }
};

NoiseReport noise_magnitude(const QuantumState &state, const MeasurementChannel &channel, const Operator &omega);

struct EigenbasisParams {
    /// Cap on |A_mn|, in the units of L (square root of a rate).
    double omega_max = 50.0;
    /// Eigenvalues at or below this count as outside the support.
    double rank_tol = 1e-10;
    /// Neighbouring support eigenvalues closer than degeneracy_tol * lambda_max
    /// form one block.
    double degeneracy_tol = 1e-9;
    /// Adds support_phase * Pi, Pi the support projector.
    double support_phase = 0.0;
    /// Optional free block on the kernel; only Pi_perp B Pi_perp is used.
    std::optional<Operator> nullspace_block;
};

struct NccDiagnostics {
    bool exists = false;
    int support_rank = 0;
    double half_signal = 0.0;
    /// X_nn in the support eigenbasis, after diagonalizing X on degenerate blocks.
    std::vector<double> diagonal;
    double max_deviation = 0.0;
};

NccDiagnostics ncc_exists_mixed(const QuantumState &state, const MeasurementChannel &channel, double tol = 1e-8,
                                const EigenbasisParams &params = {});

struct EigenbasisResult {
    Operator omega;
    bool capped = false;
    NccDiagnostics ncc;
};

/// Eigenbasis law, valid for mixed states. Cancels the noise exactly when
/// ncc_exists_mixed holds and no element hits the cap.
EigenbasisResult eigenbasis_ncqf(const QuantumState &state, const MeasurementChannel &channel,
                                 const EigenbasisParams &params = {});

/// Core of the eigenbasis law in the frame of eig.vectors. x_frame is
/// V^dag X V. Returns the frame matrix of omega + i sqrt(eta) Y.
Operator eigenbasis_frame_omega(const EigDecomposition &eig, const Operator &x_frame, double sqrt_eta,
                                const EigenbasisParams &params, bool *capped, NccDiagnostics *ncc = nullptr);

struct RestrictedScalarResult {
    double f = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    /// b^2 - 4ac; never positive up to round-off.
    double discriminant = 0.0;
    double n_min = 0.0;
    bool degenerate = false;
    bool cancellable = false;
};

/// Minimizes N over omega = f Theta.
RestrictedScalarResult restricted_min_scalar(const QuantumState &state, const MeasurementChannel &channel,
                                             const Operator &theta, double tol = 1e-10);

struct RestrictedMultiResult {
    Eigen::VectorXd f;
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    double c = 0.0;
    double n_min = 0.0;
    bool degenerate = false;
    bool cancellable = false;
};

/// Minimizes N over omega = sum_j f_j Theta_j. Null directions of the
/// quadratic form are left at zero.
RestrictedMultiResult restricted_min_multi(const QuantumState &state, const MeasurementChannel &channel,
                                           std::span<const Operator> thetas, double tol = 1e-10);

/// Law making target_projector (rank one) a stationary population:
/// omega = omega_psi Pi0 - i sqrt(eta)[Pi0, X] - i sqrt(eta) Y + Pi0_perp B Pi0_perp.
Operator population_ncqf(const Operator &target_projector, const MeasurementChannel &channel, double omega_psi,
                         const std::optional<Operator> &b_block = std::nullopt);

/// Drift of the feedback master equation:
/// i[rho, Omega] + sum_c (i[b_c[rho], omega_c] + a_{L_c}[rho] + a_{omega_c}[rho]).
Operator nc_drift(const QuantumState &state, std::span<const MeasurementChannel> channels,
                  std::span<const Operator> omegas, const Operator &omega_open_loop);

struct NoFeedback {};
struct FixedFeedback {
    Operator omega;
};
struct BasicFeedback {
    double purity_tol = 1e-6;
};
struct EigenbasisFeedback {
    EigenbasisParams params;
};
struct RestrictedFeedback {
    enum class Mode { scalar, multi };
    std::vector<Operator> thetas;
    Mode mode = Mode::scalar;
};
struct PopulationFeedback {
    Operator target_projector;
    double omega_psi = 0.0;
    std::optional<Operator> b_block;
};

using FeedbackLaw =
    std::variant<NoFeedback, FixedFeedback, BasicFeedback, EigenbasisFeedback, RestrictedFeedback, PopulationFeedback>;

std::string feedback_kind(const FeedbackLaw &law);
bool is_active(const FeedbackLaw &law);

struct SynthesisInfo {
    bool capped = false;
    bool degenerate = false;
};

/// omega for one channel given the pre-measurement state.
Operator synthesize(const FeedbackLaw &law, const QuantumState &state, const MeasurementChannel &channel,
                    SynthesisInfo *info = nullptr);

}  // namespace ncqf

#endif
