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

// Effective non-Hermitian Hamiltonian generating noise-canceled pure-state
// dynamics, d|psi>/dt = -i H_NC |psi>, and tracking of its spectrum.

#ifndef NCQF_NHH_HPP
#define NCQF_NHH_HPP

#include <span>
#include <vector>

#include "ncqf/feedback.hpp"
#include "ncqf/qmath.hpp"

namespace ncqf {

/// Xi = sqrt(eta) L - i omega.
Operator noise_operator(const MeasurementChannel &channel, const Operator &omega);

/// H_NC = Omega + sum_c [omega_c L_c - (i/2)(L_c^dag L_c + omega_c^2)
///                        + (i/2) s_c (L_c + i omega_c - s_c/4)].
/// Uses unit efficiency; s_c is taken from `state`.
Operator build_hnc(const QuantumState &state, std::span<const MeasurementChannel> channels,
                   std::span<const Operator> omegas, const Operator &omega_open_loop);

/// The same operator written through Xi = L - i omega and Y = (L - L^dag)/2.
Operator build_hnc_xi(const QuantumState &state, std::span<const MeasurementChannel> channels,
                      std::span<const Operator> omegas, const Operator &omega_open_loop);

struct NhhSpectrum {
    /// Eigenvalues of -i H_NC.
    Eigen::VectorXcd values;
    /// Unit-norm right eigenvectors; largest component made real positive.
    Operator vectors;
    /// Condition number of the eigenvector matrix.
    double condition = 1.0;
    bool exceptional = false;
};

NhhSpectrum nhh_spectrum(const Operator &h_nc, double ep_condition = 1e8);

struct SpectrumSample {
    double t = 0.0;
    /// Eigenvalues of -i H_NC sorted by real part, then imaginary part, descending.
    std::vector<cplx> values;
    /// Continuous branch label of each entry of `values`; a permutation of 0..d-1.
    std::vector<int> branch;
    bool exceptional = false;
};

/// Follows eigenvalue branches of -i H_NC(t) through time by maximal
/// eigenvector overlap, breaking ties by eigenvalue distance.
class SpectrumTracker {
   public:
    explicit SpectrumTracker(double ep_condition = 1e8) : ep_condition_(ep_condition) {
    }

    void push(double t, const Operator &h_nc);
    const std::vector<SpectrumSample> &samples() const { return samples_; }

   private:
    double ep_condition_;
    std::vector<SpectrumSample> samples_;
    Operator prev_vectors_;  // column b = eigenvector of branch b
    Eigen::VectorXcd prev_values_;
};

std::vector<SpectrumSample> spectrum_track(std::span<const double> times, std::span<const Operator> hs,
                                           double ep_condition = 1e8);

}  // namespace ncqf

#endif
