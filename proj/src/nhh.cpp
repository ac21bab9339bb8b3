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

#include "ncqf/nhh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ncqf/errors.hpp"

namespace ncqf {

Operator noise_operator(const MeasurementChannel &channel, const Operator &omega) {
    return std::sqrt(channel.eta) * channel.L - kI * omega;
}

namespace {

void check_inputs(const QuantumState &state, std::span<const MeasurementChannel> channels,
                  std::span<const Operator> omegas, const Operator &omega_open_loop) {
    if (channels.size() != omegas.size()) {
        throw ValidationError("omegas", "one feedback operator per channel is required");
    }
    for (const auto &ch : channels) {
        ch.validate(state.dim());
    }
    if (omega_open_loop.size() > 0 && omega_open_loop.rows() != state.dim()) {
        throw ValidationError("omega", "wrong dimension");
    }
}

Operator open_loop_or_zero(const Operator &omega, int n) {
    return omega.size() > 0 ? omega : Operator::Zero(n, n);
}

}  // namespace

Operator build_hnc(const QuantumState &state, std::span<const MeasurementChannel> channels,
                   std::span<const Operator> omegas, const Operator &omega_open_loop) {
    check_inputs(state, channels, omegas, omega_open_loop);
    const int n = state.dim();
    const Operator id = Operator::Identity(n, n);
    Operator h = open_loop_or_zero(omega_open_loop, n);
    for (size_t c = 0; c < channels.size(); c++) {
        const Operator &L = channels[c].L;
        const Operator &w = omegas[c];
        double s = signal(state, channels[c]);
        h += w * L - 0.5 * kI * (L.adjoint() * L + w * w) + 0.5 * kI * s * (L + kI * w - 0.25 * s * id);
    }
    return h;
}

Operator build_hnc_xi(const QuantumState &state, std::span<const MeasurementChannel> channels,
                      std::span<const Operator> omegas, const Operator &omega_open_loop) {
    check_inputs(state, channels, omegas, omega_open_loop);
    const int n = state.dim();
    const Operator id = Operator::Identity(n, n);
    Operator h = open_loop_or_zero(omega_open_loop, n);
    for (size_t c = 0; c < channels.size(); c++) {
        const Operator &L = channels[c].L;
        Operator y = (L - L.adjoint()) * 0.5;
        Operator xi = L - kI * omegas[c];
        Operator xd = xi.adjoint();
        double s = signal(state, channels[c]);
        h += kI * s * y - 0.5 * kI * (y * xi + xd * y) +
             0.25 * kI * (xi * xi - xd * xd - 2.0 * xd * xi + 2.0 * s * (xd - 0.25 * s * id));
    }
    return h;
}

NhhSpectrum nhh_spectrum(const Operator &h_nc, double ep_condition) {
    if (h_nc.rows() != h_nc.cols() || h_nc.rows() == 0) {
        throw ValidationError("h_nc", "must be square and non-empty");
    }
    Operator g = -kI * h_nc;
    Eigen::ComplexEigenSolver<Operator> solver(g, true);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("h_nc", "eigensolver failed");
    }
    NhhSpectrum out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < out.vectors.cols(); k++) {
        auto col = out.vectors.col(k);
        col.normalize();
        Eigen::Index big = 0;
        col.cwiseAbs().maxCoeff(&big);
        col *= std::abs(col(big)) / col(big);
    }
    Eigen::JacobiSVD<Operator> svd(out.vectors);
    const auto &sv = svd.singularValues();
    double smin = sv(sv.size() - 1);
    out.condition = smin > 0.0 ? sv(0) / smin : INFINITY;
    out.exceptional = !(out.condition <= ep_condition);
    return out;
}

void SpectrumTracker::push(double t, const Operator &h_nc) {
    NhhSpectrum sp = nhh_spectrum(h_nc, ep_condition_);
    const int n = static_cast<int>(sp.values.size());
    // branch_of[k]: branch assigned to eigenpair k of this sample.
    std::vector<int> branch_of(n);
    if (samples_.empty() || prev_vectors_.cols() != n) {
        std::iota(branch_of.begin(), branch_of.end(), 0);
    } else {
        struct Pair {
            double overlap;
            double distance;
            int prev;
            int next;
        };
        std::vector<Pair> pairs;
        pairs.reserve(static_cast<size_t>(n) * n);
        Operator ov = prev_vectors_.adjoint() * sp.vectors;
        for (int b = 0; b < n; b++) {
            for (int k = 0; k < n; k++) {
                pairs.push_back({std::abs(ov(b, k)), std::abs(prev_values_(b) - sp.values(k)), b, k});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair &a, const Pair &b) {
            if (std::abs(a.overlap - b.overlap) > 1e-9) {
                return a.overlap > b.overlap;
            }
            return a.distance < b.distance;
        });
        std::vector<bool> used_prev(n, false);
        std::vector<bool> used_next(n, false);
        int assigned = 0;
        for (const auto &p : pairs) {
            if (assigned == n) {
                break;
            }
            if (used_prev[p.prev] || used_next[p.next]) {
                continue;
            }
            used_prev[p.prev] = true;
            used_next[p.next] = true;
            branch_of[p.next] = p.prev;
            assigned++;
        }
    }

    Operator vectors(n, n);
    Eigen::VectorXcd values(n);
    for (int k = 0; k < n; k++) {
        vectors.col(branch_of[k]) = sp.vectors.col(k);
        values(branch_of[k]) = sp.values(k);
    }
    prev_vectors_ = std::move(vectors);
    prev_values_ = values;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (sp.values(a).real() != sp.values(b).real()) {
            return sp.values(a).real() > sp.values(b).real();
        }
        return sp.values(a).imag() > sp.values(b).imag();
    });
    SpectrumSample sample;
    sample.t = t;
    sample.exceptional = sp.exceptional;
    for (int k : order) {
        sample.values.push_back(sp.values(k));
        sample.branch.push_back(branch_of[k]);
    }
    samples_.push_back(std::move(sample));
}

std::vector<SpectrumSample> spectrum_track(std::span<const double> times, std::span<const Operator> hs,
                                           double ep_condition) {
    if (times.size() != hs.size()) {
        throw ValidationError("times", "one time per Hamiltonian is required");
    }
    SpectrumTracker tracker(ep_condition);
    for (size_t k = 0; k < hs.size(); k++) {
        tracker.push(times[k], hs[k]);
    }
    return tracker.samples();
}

}  // namespace ncqf
